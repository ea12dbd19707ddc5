#include "pclab/mcg.hpp"

#include "pclab/flips.hpp"

#include <cmath>

namespace pclab {

MappingClass MappingClass::identity(SurfacePtr S) {
    MappingClass f;
    f.surface = std::move(S);
    return f;
}

MappingClass MappingClass::twist(const NormalCurve& a, long power) {
    if (power == 0) fail("InvalidWord", "twist letters need a nonzero power");
    MappingClass f;
    f.surface = a.surface;
    f.word.push_back({a, power});
    return f;
}

MappingClass MappingClass::inverse() const {
    MappingClass f;
    f.surface = surface;
    for (auto it = word.rbegin(); it != word.rend(); ++it) f.word.push_back({it->curve, -it->power});
    return f;
}

MappingClass MappingClass::operator*(const MappingClass& g) const {
    if (surface && g.surface && surface->spec != g.surface->spec)
        fail("SurfaceMismatch", "mapping classes live on different surfaces");
    MappingClass f;
    f.surface = surface ? surface : g.surface;
    f.word = word;
    f.word.insert(f.word.end(), g.word.begin(), g.word.end());
    return f;
}

MappingClass MappingClass::pow(long n) const {
    MappingClass base = n >= 0 ? *this : inverse();
    MappingClass f = identity(surface);
    for (long k = 0; k < (n >= 0 ? n : -n); ++k) f = f * base;
    return f;
}

NormalCurve apply(const MappingClass& f, const NormalCurve& c) {
    if (f.surface && f.surface->spec != c.surface->spec)
        fail("SurfaceMismatch", "mapping class and curve live on different surfaces");
    NormalCurve x = c;
    for (auto it = f.word.rbegin(); it != f.word.rend(); ++it) x = pclab::twist(it->curve, x, it->power);
    return x;
}

PseudoAnosovSpec thurston_veech(const NormalCurve& a, const NormalCurve& b) {
    PseudoAnosovSpec s;
    s.a = a;
    s.b = b;
    PairMap g = minimal_pair(a, b);
    if (g.V == 0) fail("NotBinding", "the curves are disjoint");
    s.profile = trace_regions(g);
    if (!s.profile.binds) fail("NotBinding", "the pair does not bind the surface");
    s.stratum = stratum_signature(s.profile);
    s.principal = s.stratum.principal;
    s.trace_parameter = g.V;
    s.phi = MappingClass::twist(a, 1) * MappingClass::twist(b, -1);
    return s;
}

double tv_dilatation(const Int& t) {
    double T = t.get_d() * t.get_d() + 2;
    return (T + std::sqrt(T * T - 4)) / 2;
}

std::pair<double, double> least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double den = n * sxx - sx * sx;
    if (den == 0) return {0, n > 0 ? sy / n : 0};
    double slope = (n * sxy - sx * sy) / den;
    return {slope, (sy - slope * sx) / n};
}

namespace {

double log1p_int(const Int& v) {
    // log(1 + v) for arbitrarily large v via the mantissa/exponent split
    Int w = v + 1;
    long exp = 0;
    double m = mpz_get_d_2exp(&exp, w.get_mpz_t());
    return std::log(m) + static_cast<double>(exp) * std::log(2.0);
}

}  // namespace

GrowthReport dilatation_estimate(const MappingClass& phi, const NormalCurve& probe, int n) {
    if (n < 3) fail("InvalidArgument", "dilatation estimate needs n >= 3");
    GrowthReport r;
    NormalCurve x = probe;
    std::vector<double> ks, logk;
    for (int k = 1; k <= n; ++k) {
        x = apply(phi, x);
        Int i = geometric_intersection(x, probe);
        r.intersections.push_back(i);
        r.logs.push_back(log1p_int(i));
        ks.push_back(k);
        logk.push_back(std::log(static_cast<double>(k)));
    }
    std::tie(r.slope, r.intercept) = least_squares(ks, r.logs);
    for (int k = 0; k < n; ++k) r.residuals.push_back(r.logs[k] - (r.slope * ks[k] + r.intercept));
    r.tail_slope = r.logs[n - 1] - r.logs[n - 2];
    r.loglog_slope = least_squares(logk, r.logs).first;
    return r;
}

}  // namespace pclab
