#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "pclab/io.hpp"

#include <cmath>
#include <map>

using namespace pclab;
using fixture::Pair;

namespace {

std::vector<double> unit_sum(const NormalCurve& c) {
    auto w = c.edge_weights();
    Int total = 0;
    for (const Int& x : w) total += x;
    std::vector<double> out;
    for (const Int& x : w) out.push_back(Rat(x, total).get_d());
    return out;
}

double sup_distance(const std::vector<double>& x, const std::vector<double>& y) {
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::fabs(x[i] - y[i]));
    return d;
}

StepMeasure twist_measure(const Pair& p, long power) {
    return StepMeasure::uniform({MappingClass::twist(p.a, power), MappingClass::twist(p.a, -power),
                                 MappingClass::twist(p.b, power), MappingClass::twist(p.b, -power)});
}

}  // namespace

TEST_CASE("entropy closed forms") {
    SurfacePtr S = build_surface(1, 2);
    auto shorts = short_curves(S);
    std::vector<MappingClass> four;
    for (int i = 0; i < 4; ++i) four.push_back(MappingClass::twist(shorts[i % shorts.size()], i + 1));
    CHECK(entropy(StepMeasure::uniform(four)) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(entropy(StepMeasure::uniform(four)) == doctest::Approx(1.386294).epsilon(1e-6));
    StepMeasure half{{four[0], four[1], four[2]}, {Rat(1, 2), Rat(1, 4), Rat(1, 4)}};
    CHECK(entropy(half) == doctest::Approx(1.5 * std::log(2.0)).epsilon(1e-14));
    CHECK(entropy(half) == doctest::Approx(1.039721).epsilon(1e-6));
    CHECK(entropy(StepMeasure{{MappingClass::identity(S)}, {Rat(1)}}) == 0.0);
    // term-by-term
    StepMeasure odd{{four[0], four[1], four[2]}, {Rat(1, 3), Rat(1, 6), Rat(1, 2)}};
    double h = 0;
    for (const Rat& w : odd.weights) h -= w.get_d() * std::log(w.get_d());
    CHECK(entropy(odd) == doctest::Approx(h).epsilon(1e-14));
}

TEST_CASE("invalid measures are rejected") {
    SurfacePtr S = build_surface(1, 2);
    MappingClass t = MappingClass::twist(short_curves(S)[0]);
    std::vector<StepMeasure> bad = {
        {{t, t.inverse()}, {Rat(1, 2), Rat(1, 3)}},
        {{t, t.inverse()}, {Rat(3, 2), Rat(-1, 2)}},
        {{t, t.inverse()}, {Rat(1), Rat(0)}},
        {{t}, {Rat(1), Rat(0)}},
        {{}, {}},
    };
    for (const StepMeasure& mu : bad) {
        try {
            mu.validate();
            FAIL("accepted an invalid measure");
        } catch (const Error& e) {
            CHECK(e.code() == "InvalidMeasure");
        }
    }
    CHECK_NOTHROW(StepMeasure::uniform({t, t.inverse(), t}).validate());
}

TEST_CASE("distance proxy classes") {
    Pair oct = fixture::octagon_pair();
    CHECK(cg_distance_proxy(oct.a, oct.a) == 0);
    SurfacePtr S = oct.a.surface;
    auto shorts = short_curves(S);
    for (std::size_t j = 1; j < shorts.size(); ++j)
        if (!same_curve(shorts[0], shorts[j]) && geometric_intersection(shorts[0], shorts[j]) == 0) {
            CHECK(cg_distance_proxy(shorts[0], shorts[j]) == 1);
            break;
        }
    Int i = geometric_intersection(oct.a, oct.b);
    double expect = std::max(3.0, 2 * std::log2(i.get_d()) + 2);
    CHECK(cg_distance_proxy(oct.a, oct.b) == doctest::Approx(expect));
    int twos = 0;
    for (std::uint64_t k = 0; k < 60 && twos == 0; ++k) {
        Pair p = fixture::random_pair(S, k, 2);
        if (same_curve(p.a, p.b) || geometric_intersection(p.a, p.b) == 0 || fixture::is_binding(p)) continue;
        CHECK(cg_distance_proxy(p.a, p.b) == 2);
        ++twos;
    }
    CHECK(twos == 1);
}

TEST_CASE("logarithmic moment against direct summation") {
    Pair p = fixture::octagon_pair();
    SurfacePtr S = p.a.surface;
    StepMeasure id{{MappingClass::identity(S)}, {Rat(1)}};
    LogMomentReport r0 = log_moment(id, p.a);
    CHECK(r0.plain == 0);
    CHECK(r0.logarithmic == 0);
    LogMomentReport r1 = log_moment(StepMeasure::uniform({MappingClass::twist(p.a), MappingClass::twist(p.a, -3)}), p.a);
    for (double d : r1.distances) CHECK(d == 0);
    CHECK(r1.plain == 0);

    MappingClass phi = thurston_veech(p.a, p.b).phi;
    StepMeasure mixed{{MappingClass::twist(p.a), MappingClass::twist(p.b, -1), phi, MappingClass::identity(S)},
                      {Rat(1, 8), Rat(3, 8), Rat(1, 4), Rat(1, 4)}};
    LogMomentReport r = log_moment(mixed, p.a);
    REQUIRE(r.distances.size() == 4);
    double plain = 0, logarithmic = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        double d = cg_distance_proxy(p.a, apply(mixed.support[k], p.a));
        CHECK(r.distances[k] == d);
        plain += mixed.weights[k].get_d() * std::max(0.0, d);
        logarithmic += mixed.weights[k].get_d() * std::log1p(std::max(0.0, d));
    }
    CHECK(r.plain == doctest::Approx(plain).epsilon(1e-14));
    CHECK(r.logarithmic == doctest::Approx(logarithmic).epsilon(1e-14));
    CHECK(r.plain > 0);
}

TEST_CASE("identity walk is constant") {
    SurfacePtr S = build_surface(1, 2);
    NormalCurve c0 = random_curve(S, 4, 2);
    WalkStats ws = sample_paths(StepMeasure{{MappingClass::identity(S)}, {Rat(1)}}, 60, 5, 7, c0);
    REQUIRE(ws.paths.size() == 5);
    for (const PathStats& p : ws.paths) {
        CHECK(p.intersections.size() == 61);
        for (const Int& i : p.intersections) CHECK(i == 0);
        for (double x : p.log_intersections) CHECK(x == 0);
        for (double x : p.cg_proxy) CHECK(x == 0);
        for (const auto& b : p.pc_bound) {
            REQUIRE(b.has_value());
            CHECK(*b == 0);
        }
        for (const auto& x : p.projective) CHECK(x == unit_sum(c0));
    }
    ConvergenceReport r = convergence_report(ws, 1e-3);
    CHECK(r.cauchy_fraction == 1.0);
    CHECK(r.median_drift == 0);
    CHECK(r.ci_low == 0);
    CHECK(r.ci_high == 0);
    CHECK(r.direction_dispersion == 0);
}

TEST_CASE("walks are deterministic in the seed") {
    Pair p = fixture::octagon_pair();
    StepMeasure mu = twist_measure(p, 1);
    WalkStats a = sample_paths(mu, 30, 4, 11, p.a, 1), b = sample_paths(mu, 30, 4, 11, p.a, 4);
    CHECK(io::walk_to_csv(a) == io::walk_to_csv(b));
    WalkStats c = sample_paths(mu, 30, 4, 12, p.a);
    CHECK(io::walk_to_csv(a) != io::walk_to_csv(c));
    CHECK(a.paths[2].increments == draw_increments(mu, 30, derive_seed(11, 2)));
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("walk statistics agree with a forward recomputation") {
    Pair p = fixture::octagon_pair();
    StepMeasure mu = twist_measure(p, 1);
    WalkStats ws = sample_paths(mu, 24, 2, 3, p.a);
    for (const PathStats& path : ws.paths) {
        REQUIRE(path.increments.size() == 24);
        CHECK(path.projective_from == 18);
        MappingClass w = MappingClass::identity(p.a.surface);
        for (int n = 1; n <= 24; ++n) {
            w = w * mu.support[path.increments[n - 1]];
            NormalCurve x = apply(w, p.a);
            CHECK(path.intersections[n] == geometric_intersection(p.a, x));
            CHECK(path.log_intersections[n] == doctest::Approx(std::log1p(path.intersections[n].get_d())));
            if (n >= path.projective_from) {
                auto expect = unit_sum(x);
                CHECK(sup_distance(path.projective[n - path.projective_from], expect) < 1e-12);
            }
        }
    }
}

TEST_CASE("two-step distribution converges to the exact convolution") {
    Pair p = fixture::octagon_pair();
    SurfacePtr S = p.a.surface;
    MappingClass ta = MappingClass::twist(p.a);
    StepMeasure mu{{ta, ta.inverse(), MappingClass::twist(p.b)}, {Rat(1, 2), Rat(1, 3), Rat(1, 6)}};
    auto probes = short_curves(S);
    auto exact = oracle::two_step_convolution(mu, probes);
    std::map<std::pair<int, int>, std::vector<Int>> key;
    std::map<std::vector<Int>, double> empirical;
    const int draws = 10000;
    for (int s = 0; s < draws; ++s) {
        auto inc = draw_increments(mu, 2, derive_seed(2024, s));
        std::pair<int, int> ij{inc[0], inc[1]};
        if (!key.count(ij)) key[ij] = oracle::signature(mu.support[inc[0]] * mu.support[inc[1]], probes);
        empirical[key[ij]] += 1.0 / draws;
    }
    // identity appears from T_a T_a^-1 and T_a^-1 T_a
    CHECK(exact.size() < 9);
    double tv = 0;
    for (const auto& [k, pr] : exact) tv += std::fabs(pr.get_d() - empirical[k]);
    for (const auto& [k, pr] : empirical)
        if (!exact.count(k)) tv += pr;
    tv /= 2;
    MESSAGE("total variation: " << tv);
    CHECK(tv < 0.05);
    Rat total = 0;
    for (const auto& [k, pr] : exact) total += pr;
    CHECK(total == 1);
}

TEST_CASE("short walks are rejected by the convergence report") {
    Pair p = fixture::octagon_pair();
    WalkStats ws = sample_paths(twist_measure(p, 1), 49, 2, 1, p.a);
    try {
        convergence_report(ws, 1e-3);
        FAIL("accepted a short walk");
    } catch (const Error& e) {
        CHECK(e.code() == "TooShort");
    }
}

TEST_CASE("deterministic pseudo-Anosov walk converges to the attracting direction") {
    Pair p = fixture::principal_pair(4);
    MappingClass phi = thurston_veech(p.a, p.b).phi;
    WalkStats ws = sample_paths(StepMeasure{{phi}, {Rat(1)}}, 60, 2, 5, p.a);
    ConvergenceReport r = convergence_report(ws, 1e-3);
    CHECK(r.cauchy_fraction == 1.0);
    CHECK(r.direction_dispersion == 0);
    // power iteration well past the walk length
    auto limit = unit_sum(apply(phi.pow(120), p.a));
    CHECK(sup_distance(ws.paths[0].projective.back(), limit) < 1e-9);
    double target = std::log(tv_dilatation(4));
    CHECK(std::fabs(r.median_drift - target) / target < 0.05);
    CHECK(r.ci_low <= r.median_drift);
    CHECK(r.median_drift <= r.ci_high);
}

TEST_CASE("larger twist powers do not decrease the drift") {
    Pair p = fixture::octagon_pair();
    double last = -1;
    for (long k = 1; k <= 3; ++k) {
        ConvergenceReport r = convergence_report(sample_paths(twist_measure(p, k), 60, 16, 9, p.a), 1e-3);
        MESSAGE("power " << k << ": median drift " << r.median_drift);
        CHECK(r.median_drift > 0);
        CHECK(r.median_drift >= last);
        last = r.median_drift;
    }
}

TEST_CASE("walk CSV and measure JSON round trips") {
    Pair p = fixture::octagon_pair();
    StepMeasure mu = twist_measure(p, 2);
    mu.weights = {Rat(1, 2), Rat(1, 6), Rat(1, 6), Rat(1, 6)};
    WalkStats ws = sample_paths(mu, 20, 3, 8, p.a);
    std::string csv = io::walk_to_csv(ws);
    CHECK(csv.rfind(io::kWalkCsvHeader, 0) == 0);
    WalkStats back = io::walk_from_csv(csv);
    CHECK(back.steps == ws.steps);
    CHECK(back.seed == ws.seed);
    REQUIRE(back.paths.size() == ws.paths.size());
    for (std::size_t i = 0; i < ws.paths.size(); ++i) {
        CHECK(back.paths[i].increments == ws.paths[i].increments);
        CHECK(back.paths[i].intersections == ws.paths[i].intersections);
        CHECK(back.paths[i].log_intersections == ws.paths[i].log_intersections);
        CHECK(back.paths[i].cg_proxy == ws.paths[i].cg_proxy);
        CHECK(back.paths[i].pc_bound == ws.paths[i].pc_bound);
        CHECK(back.paths[i].projective_from == ws.paths[i].projective_from);
        CHECK(back.paths[i].projective == ws.paths[i].projective);
    }
    CHECK(io::walk_to_csv(back) == csv);

    StepMeasure m2 = io::measure_from_json(io::json::parse(io::measure_to_json(mu).dump()));
    CHECK(m2.weights == mu.weights);
    REQUIRE(m2.support.size() == mu.support.size());
    for (std::size_t i = 0; i < mu.support.size(); ++i) {
        CHECK(m2.support[i].word.size() == mu.support[i].word.size());
        CHECK(apply(m2.support[i], p.b).same_coordinates(apply(mu.support[i], p.b)));
    }
    auto j = io::measure_to_json(mu);
    j[0]["weight-numerator"] = 2;
    CHECK_THROWS_AS(io::measure_from_json(j), Error);
}
