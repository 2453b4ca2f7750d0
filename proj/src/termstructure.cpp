#include "elswap/termstructure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elswap {

namespace detail {

Grid2d::Grid2d(std::vector<double> t, std::vector<double> u, std::vector<double> v)
    : ts(std::move(t)), us(std::move(u)), values(std::move(v)) {
    if (ts.size() < 2 || us.size() < 2)
        throw std::invalid_argument("tabulated curve: need >= 2 grid points per axis");
    if (values.size() != ts.size() * us.size())
        throw std::invalid_argument("tabulated curve: values size must be |ts| * |us|");
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (!(ts[i - 1] < ts[i]))
            throw std::invalid_argument("tabulated curve: t grid must be strictly increasing");
    for (std::size_t i = 1; i < us.size(); ++i)
        if (!(us[i - 1] < us[i]))
            throw std::invalid_argument("tabulated curve: u grid must be strictly increasing");
    for (double x : values)
        if (!std::isfinite(x))
            throw std::invalid_argument("tabulated curve: non-finite value");
}

namespace {
std::size_t cell(const std::vector<double>& axis, double x) {
    if (x < axis.front() || x > axis.back())
        throw std::domain_error("tabulated curve: evaluation outside the grid");
    auto hi = std::lower_bound(axis.begin(), axis.end(), x);
    std::size_t i = static_cast<std::size_t>(hi - axis.begin());
    if (i == 0)
        i = 1;
    if (i == axis.size())
        i = axis.size() - 1;
    return i;
}
}  // namespace

double Grid2d::at(double t, double u) const {
    const std::size_t i = cell(ts, t);
    const std::size_t j = cell(us, u);
    const double st = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
    const double su = (u - us[j - 1]) / (us[j] - us[j - 1]);
    const std::size_t n = us.size();
    const double v00 = values[(i - 1) * n + (j - 1)];
    const double v01 = values[(i - 1) * n + j];
    const double v10 = values[i * n + (j - 1)];
    const double v11 = values[i * n + j];
    return (1 - st) * ((1 - su) * v00 + su * v01) + st * ((1 - su) * v10 + su * v11);
}

double Grid2d::max_value() const { return *std::max_element(values.begin(), values.end()); }

}  // namespace detail

// ---------------------------------------------------------------- volatility

VolatilityCurve VolatilityCurve::constant(double sigma0) {
    if (!(sigma0 > 0.0))
        throw std::invalid_argument("volatility: sigma0 must be > 0");
    return VolatilityCurve(Kind::constant, sigma0, 0.0, 0.0);
}

VolatilityCurve VolatilityCurve::seasonal(double a, double b, double c) {
    if (!(a > b && b > 0.0))
        throw std::invalid_argument("seasonal volatility: a > b > 0 required");
    if (!(c >= 0.0 && c < 1.0))
        throw std::invalid_argument("seasonal volatility: c in [0, 1) required");
    return VolatilityCurve(Kind::seasonal, a, b, c);
}

VolatilityCurve VolatilityCurve::samuelson(double lambda_bar, double damping) {
    if (!(lambda_bar > 0.0) || !(damping > 0.0))
        throw std::invalid_argument("samuelson volatility: lambda_bar > 0 and Lambda > 0 required");
    return VolatilityCurve(Kind::samuelson, lambda_bar, damping, 0.0);
}

VolatilityCurve VolatilityCurve::tabulated(std::vector<double> ts, std::vector<double> us,
                                           std::vector<double> values) {
    for (double v : values)
        if (!(v > 0.0))
            throw std::invalid_argument("tabulated volatility: values must be > 0");
    VolatilityCurve c(Kind::tabulated, 0.0, 0.0, 0.0);
    c.grid_ = detail::Grid2d(std::move(ts), std::move(us), std::move(values));
    return c;
}

double VolatilityCurve::operator()(double t, double u) const {
    switch (kind_) {
        case Kind::constant:
            return p1_;
        case Kind::seasonal:
            return p1_ + p2_ * std::cos(2.0 * M_PI * (u + p3_));
        case Kind::samuelson:
            return p1_ * std::exp(-p2_ * (u - t));
        case Kind::tabulated:
            return grid_.at(t, u);
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------- jump coefficient

JumpCoefficientCurve JumpCoefficientCurve::constant(double eta0) {
    if (!std::isfinite(eta0))
        throw std::invalid_argument("jump coefficient: eta0 must be finite");
    JumpCoefficientCurve c(Kind::constant);
    c.eta0_ = eta0;
    return c;
}

JumpCoefficientCurve JumpCoefficientCurve::piecewise_in_delivery(std::vector<double> breaks,
                                                                 std::vector<double> levels) {
    if (levels.size() != breaks.size() + 1)
        throw std::invalid_argument("piecewise jump coefficient: need |levels| == |breaks| + 1");
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i - 1] < breaks[i]))
            throw std::invalid_argument("piecewise jump coefficient: breaks must be increasing");
    for (double l : levels)
        if (!std::isfinite(l))
            throw std::invalid_argument("piecewise jump coefficient: non-finite level");
    JumpCoefficientCurve c(Kind::piecewise);
    c.breaks_ = std::move(breaks);
    c.levels_ = std::move(levels);
    return c;
}

JumpCoefficientCurve JumpCoefficientCurve::tabulated(std::vector<double> ts, std::vector<double> us,
                                                     std::vector<double> values) {
    JumpCoefficientCurve c(Kind::tabulated);
    c.grid_ = detail::Grid2d(std::move(ts), std::move(us), std::move(values));
    return c;
}

double JumpCoefficientCurve::operator()(double t, double u) const {
    switch (kind_) {
        case Kind::constant:
            return eta0_;
        case Kind::piecewise: {
            auto hi = std::lower_bound(breaks_.begin(), breaks_.end(), u);
            return levels_[static_cast<std::size_t>(hi - breaks_.begin())];
        }
        case Kind::tabulated:
            return grid_.at(t, u);
    }
    throw std::logic_error("unreachable");
}

double JumpCoefficientCurve::sup() const {
    switch (kind_) {
        case Kind::constant:
            return eta0_;
        case Kind::piecewise:
            return *std::max_element(levels_.begin(), levels_.end());
        case Kind::tabulated:
            return grid_.max_value();
    }
    throw std::logic_error("unreachable");
}

// ----------------------------------------------------------------- drift

DriftCurve DriftCurve::constant(double mu0) {
    if (!std::isfinite(mu0))
        throw std::invalid_argument("drift: mu0 must be finite");
    return DriftCurve(Kind::constant, mu0);
}

DriftCurve DriftCurve::tabulated(std::vector<double> ts, std::vector<double> us,
                                 std::vector<double> values) {
    DriftCurve c(Kind::constant, 0.0);
    c.kind_ = Kind::tabulated;
    c.grid_ = detail::Grid2d(std::move(ts), std::move(us), std::move(values));
    return c;
}

double DriftCurve::operator()(double t, double u) const {
    return kind_ == Kind::constant ? mu0_ : grid_.at(t, u);
}

// ------------------------------------------------------------ mean reversion

MeanReversion MeanReversion::constant(double kappa0) {
    if (!(kappa0 >= 0.0))
        throw std::invalid_argument("mean reversion: kappa0 must be >= 0");
    return MeanReversion(Kind::constant, kappa0);
}

MeanReversion MeanReversion::tabulated(std::vector<double> ts, std::vector<double> ks) {
    if (ts.size() != ks.size() || ts.size() < 2)
        throw std::invalid_argument("mean reversion: need >= 2 (t, kappa) knots");
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (!(ts[i - 1] < ts[i]))
            throw std::invalid_argument("mean reversion: t knots must be strictly increasing");
    for (double k : ks)
        if (!(k >= 0.0))
            throw std::invalid_argument("mean reversion: kappa must be >= 0");
    MeanReversion m(Kind::tabulated, 0.0);
    m.ts_ = std::move(ts);
    m.ks_ = std::move(ks);
    return m;
}

double MeanReversion::operator()(double t) const {
    if (kind_ == Kind::constant)
        return kappa0_;
    if (t < ts_.front() || t > ts_.back())
        throw std::domain_error("mean reversion: evaluation outside the knot span");
    auto hi = std::lower_bound(ts_.begin(), ts_.end(), t);
    std::size_t i = static_cast<std::size_t>(hi - ts_.begin());
    if (i == 0)
        return ks_.front();
    if (i == ts_.size())
        i = ts_.size() - 1;
    const double s = (t - ts_[i - 1]) / (ts_[i] - ts_[i - 1]);
    return ks_[i - 1] + s * (ks_[i] - ks_[i - 1]);
}

double MeanReversion::integral(double t0, double t1) const {
    if (!(t0 <= t1))
        throw std::invalid_argument("mean reversion: integral needs t0 <= t1");
    if (kind_ == Kind::constant)
        return kappa0_ * (t1 - t0);
    double acc = 0.0;
    double lo = t0;
    for (std::size_t i = 1; i < ts_.size() && lo < t1; ++i) {
        const double hi = std::min(t1, ts_[i]);
        if (hi <= lo || ts_[i] < t0)
            continue;
        acc += 0.5 * ((*this)(lo) + (*this)(hi)) * (hi - lo);
        lo = hi;
    }
    if (lo < t1)
        acc += 0.5 * ((*this)(lo) + (*this)(t1)) * (t1 - lo);
    return acc;
}

// ------------------------------------------------------------- closed forms

std::pair<double, double> seasonal_moments(double a, double b, double c,
                                           const DeliveryPeriod& period,
                                           const WeightScheme& scheme,
                                           const QuadratureRule& quad) {
    // b = 0 is admitted here as the degenerate constant curve.
    if (!(a > b && b >= 0.0) || !(c >= 0.0 && c < 1.0))
        throw std::invalid_argument("seasonal moments: a > b >= 0 and c in [0, 1) required");
    if (scheme.kind() == WeightScheme::Kind::uniform) {
        const double d = period.length();
        const double s1 = std::sin(2.0 * M_PI * (period.tau2 + c)) - std::sin(2.0 * M_PI * (period.tau1 + c));
        const double s2 = std::sin(4.0 * M_PI * (period.tau2 + c)) - std::sin(4.0 * M_PI * (period.tau1 + c));
        const double mean = a + b / (2.0 * M_PI * d) * s1;
        const double second =
            a * a + 0.5 * b * b + a * b / (M_PI * d) * s1 + b * b / (8.0 * M_PI * d) * s2;
        return {mean, second};
    }
    const DeliveryAverager avg(scheme, period, quad);
    auto s1 = [&](double u) { return a + b * std::cos(2.0 * M_PI * (u + c)); };
    return {avg.expect(s1), avg.expect([&](double u) {
                const double v = s1(u);
                return v * v;
            })};
}

namespace {

// (1 - e^{-x}) / x, with the 3-term Taylor expansion below x = 1e-8
// to avoid the 0/0 degeneracy as the damping vanishes.
double one_minus_exp_over(double x) {
    if (x < 1e-8)
        return 1.0 - 0.5 * x + x * x / 6.0;
    return -std::expm1(-x) / x;
}

// h(2x) - h(x)^2 for h(x) = (1 - e^{-x})/x: the normalized variance
// Lbarbar - Lbar^2 up to lambda_bar^2. Direct evaluation cancels all
// digits as x -> 0, so small x uses the series (positive term by term
// on the switch range, keeping the MPDP sign exact).
double samuelson_variance_ratio(double x) {
    if (x < 0.04) {
        const double p = 1.0 / 12.0 +
                         x * (-1.0 / 12.0 +
                              x * (17.0 / 360.0 +
                                   x * (-7.0 / 360.0 +
                                        x * (43.0 / 6720.0 +
                                             x * (-107.0 / 60480.0 + x * (769.0 / 1814400.0))))));
        return x * x * p;
    }
    const double h1 = one_minus_exp_over(x);
    return one_minus_exp_over(2.0 * x) - h1 * h1;
}

}  // namespace

double samuelson_mpdp(double lambda_bar, double damping, double t, const DeliveryPeriod& period) {
    if (!(lambda_bar > 0.0) || !(damping >= 0.0))
        throw std::invalid_argument("samuelson mpdp: lambda_bar > 0 and Lambda >= 0 required");
    if (t > period.tau1)
        throw std::domain_error("samuelson mpdp: t must not exceed tau1");
    const double x = damping * period.length();
    const double lbar = one_minus_exp_over(x);
    return -0.5 * lambda_bar * samuelson_variance_ratio(x) / lbar *
           std::exp(-damping * (period.tau1 - t));
}

}  // namespace elswap
