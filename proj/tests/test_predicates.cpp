#include "doctest.h"
#include "fixtures.hpp"

using namespace pclab;
using fixture::Pair;

namespace {

const std::vector<EdgeRule> kRules = {EdgeRule::parse("cg"), EdgeRule::parse("cg0"), EdgeRule::parse("principal"),
                                      EdgeRule::parse("principal6"), EdgeRule::parse("intermediate")};

MappingClass random_class(const SurfacePtr& S, std::uint64_t k) {
    auto gens = short_curves(S);
    MappingClass f = MappingClass::identity(S);
    for (int j = 0; j < 3; ++j)
        f = f * MappingClass::twist(gens[(k * 7 + j * 3) % gens.size()], (k >> j) % 2 ? 1 : -1);
    return f;
}

bool small_surface(const SurfaceSpec& s) {
    return (s.genus == 0 && s.punctures == 5) || (s.genus == 1 && s.punctures == 2);
}

std::vector<Pair> disjoint_pairs(const SurfacePtr& S, int count) {
    std::vector<Pair> out;
    auto shorts = short_curves(S);
    for (std::size_t i = 0; i < shorts.size(); ++i)
        for (std::size_t j = i + 1; j < shorts.size(); ++j) {
            if (static_cast<int>(out.size()) >= count) return out;
            if (!same_curve(shorts[i], shorts[j]) && geometric_intersection(shorts[i], shorts[j]) == 0)
                out.push_back({shorts[i], shorts[j]});
        }
    return out;
}

}  // namespace

TEST_CASE("rule names parse and print") {
    for (std::string n : {"cg", "cg0", "principal", "principal6", "intermediate"}) CHECK(EdgeRule::parse(n).name() == n);
    CHECK(EdgeRule::parse("principal").punctured_threshold == 4);
    CHECK(EdgeRule::parse("principal6").punctured_threshold == 6);
    CHECK(EdgeRule{}.punctured_threshold == 4);
    try {
        EdgeRule::parse("pc");
        FAIL("accepted an unknown rule");
    } catch (const Error& e) {
        CHECK(e.code() == "InvalidRule");
    }
}

TEST_CASE("every rule is symmetric and mapping-class equivariant") {
    for (SurfacePtr S : fixture::corpus_surfaces())
        for (std::uint64_t k = 0; k < 40; ++k) {
            Pair p = k % 2 ? fixture::random_pair(S, 500 + k, 2) : fixture::twisted_pair(S, 500 + k);
            if (same_curve(p.a, p.b) || !explicit_feasible(p.a, p.b, ExplicitLimits{400000})) continue;
            MappingClass f = random_class(S, k);
            NormalCurve fa = apply(f, p.a), fb = apply(f, p.b);
            if (!explicit_feasible(fa, fb, ExplicitLimits{400000})) continue;
            for (const EdgeRule& r : kRules) {
                bool e = adjacent(p.a, p.b, r);
                CHECK(adjacent(p.b, p.a, r) == e);
                CHECK(adjacent(fa, fb, r) == e);
            }
        }
}

TEST_CASE("rule hierarchy: CG0 edge implies principal edge implies not completely filling") {
    const EdgeRule cg0 = EdgeRule::parse("cg0"), pc = EdgeRule::parse("principal");
    int cg0_edges = 0;
    for (SurfacePtr S : fixture::corpus_surfaces())
        for (std::uint64_t k = 0; k < 150; ++k) {
            Pair p = fixture::twisted_pair(S, k);
            if (same_curve(p.a, p.b) || !explicit_feasible(p.a, p.b, ExplicitLimits{400000})) continue;
            bool e0 = adjacent(p.a, p.b, cg0), ep = adjacent(p.a, p.b, pc);
            cg0_edges += e0;
            if (e0) CHECK(ep);
            if (ep) CHECK(pc_distance_class(p.a, p.b, pc) == 1);
            if (!ep) CHECK(pc_distance_class(p.a, p.b, pc) == 2);
            // the threshold-6 variant has fewer witnesses
            if (adjacent(p.a, p.b, EdgeRule::parse("principal6"))) CHECK(ep);
        }
    CHECK(cg0_edges > 0);
}

TEST_CASE("disjoint curves on genus three are CG0 and principal neighbours") {
    SurfacePtr S = build_surface(3, 0);
    auto pairs = disjoint_pairs(S, 10);
    REQUIRE(!pairs.empty());
    for (const Pair& p : pairs) {
        EdgeVerdict v = edge_verdict(p.a, p.b, EdgeRule::parse("cg0"));
        CHECK(v.adjacent);
        REQUIRE(v.witness_faces.size() == 1);
        const FaceRecord& f = v.profile.faces[v.witness_faces[0]];
        CHECK(f.euler_char - f.puncture_count < 0);
        CHECK(adjacent(p.a, p.b, EdgeRule::parse("principal")));
        CHECK(adjacent(p.a, p.b, EdgeRule::parse("cg")));
    }
}

TEST_CASE("curve-graph edges are CG0 edges away from the two sporadic surfaces") {
    const EdgeRule cg0 = EdgeRule::parse("cg0");
    for (SurfacePtr S : fixture::corpus_surfaces()) {
        auto pairs = disjoint_pairs(S, 8);
        REQUIRE(!pairs.empty());
        for (const Pair& p : pairs) {
            if (!small_surface(S->spec)) {
                CHECK(adjacent(p.a, p.b, cg0));
                continue;
            }
            CHECK_FALSE(adjacent(p.a, p.b, cg0));
            PcBound b = pc_upper_bound(p.a, p.b, cg0);
            REQUIRE(b.bound.has_value());
            CHECK(*b.bound <= 2);
        }
    }
}

TEST_CASE("equal curves") {
    NormalCurve c = random_curve(build_surface(2, 0), 9, 2);
    CHECK_THROWS_WITH_AS(adjacent(c, c, EdgeRule{}), doctest::Contains("isotopic"), Error);
    try {
        edge_verdict(c, c, EdgeRule{});
    } catch (const Error& e) {
        CHECK(e.code() == "EqualCurves");
    }
    CHECK(pc_distance_class(c, c, EdgeRule{}) == 0);
    CHECK(cg_distance_class(c, c).value == 0);
    CHECK(*pc_upper_bound(c, c, EdgeRule{}).bound == 0);
}

TEST_CASE("principal genus-two binding pair is not a principal edge") {
    SurfacePtr S = build_surface(2, 0);
    int found = 0;
    for (std::uint64_t from = 0; from < 40000 && found == 0; from += 2000)
        for (const Pair& p : fixture::binding_pairs(S, 40, from)) {
            RegionProfile prof = census(p.a, p.b);
            if (!stratum_signature(prof).principal) continue;
            ++found;
            int hex = 0;
            for (const FaceRecord& f : prof.faces) {
                CHECK(f.kind == FaceKind::Polygon);
                CHECK((f.side_count == 4 || f.side_count == 6));
                hex += f.side_count == 6;
            }
            CHECK(hex == 4);
            CHECK_FALSE(adjacent(p.a, p.b, EdgeRule::parse("principal")));
            CHECK(pc_distance_class(p.a, p.b, EdgeRule::parse("principal")) == 2);
            break;
        }
    CHECK(found > 0);
}

TEST_CASE("curve-graph distance classes with disjoint witnesses") {
    int twos = 0, threes = 0, ones = 0;
    for (SurfacePtr S : fixture::corpus_surfaces()) {
        for (const Pair& p : disjoint_pairs(S, 3)) {
            CHECK(cg_distance_class(p.a, p.b).value == 1);
            ++ones;
        }
        for (std::uint64_t k = 0; k < 120; ++k) {
            Pair p = fixture::twisted_pair(S, k);
            if (same_curve(p.a, p.b) || !explicit_feasible(p.a, p.b, ExplicitLimits{400000})) continue;
            CgDistance r = cg_distance_class(p.a, p.b);
            Int i = geometric_intersection(p.a, p.b);
            if (i == 0) {
                CHECK(r.value == 1);
                continue;
            }
            bool b = fixture::is_binding(p);
            CHECK(r.value == (b ? 3 : 2));
            if (r.value == 3) ++threes;
            if (r.value != 2) continue;
            ++twos;
            REQUIRE(r.witness.has_value());
            CHECK_NOTHROW(validate_curve(*r.witness));
            CHECK(geometric_intersection(*r.witness, p.a) == 0);
            CHECK(geometric_intersection(*r.witness, p.b) == 0);
            CHECK_FALSE(same_curve(*r.witness, p.a));
            CHECK_FALSE(same_curve(*r.witness, p.b));
        }
    }
    CHECK(ones > 0);
    CHECK(twos > 0);
    CHECK(threes > 0);
}

TEST_CASE("witnessed upper bounds are explicit edge paths") {
    const EdgeRule pc = EdgeRule::parse("principal");
    int carriers = 0, bounded = 0;
    for (SurfacePtr S : fixture::corpus_surfaces())
        for (const Pair& p : fixture::binding_pairs(S, 6)) {
            PcBound b = pc_upper_bound(p.a, p.b, pc, 120);
            if (!b.bound) continue;
            ++bounded;
            REQUIRE(b.chain.size() == b.links.size() + 1);
            CHECK(static_cast<int>(b.links.size()) == *b.bound);
            CHECK(b.chain.front().same_coordinates(p.a));
            CHECK(b.chain.back().same_coordinates(p.b));
            CHECK(*b.bound >= pc_distance_class(p.a, p.b, pc));
            for (std::size_t i = 0; i < b.links.size(); ++i) {
                const NormalCurve &x = b.chain[i], &y = b.chain[i + 1];
                CHECK_FALSE(same_curve(x, y));
                if (b.links[i].kind == ChainLink::Carrier) {
                    ++carriers;
                    CHECK(b.links[i].carrier_stage >= 0);
                }
                if (explicit_feasible(x, y, ExplicitLimits{4000000})) CHECK(adjacent(x, y, pc));
            }
        }
    CHECK(bounded > 0);
    MESSAGE("carrier links used: " << carriers);
}

TEST_CASE("adjacent pairs have witnessed bound one") {
    const EdgeRule pc = EdgeRule::parse("principal");
    int n = 0;
    for (SurfacePtr S : fixture::corpus_surfaces())
        for (std::uint64_t k = 0; k < 40 && n < 40; ++k) {
            Pair p = fixture::random_pair(S, k, 2);
            if (same_curve(p.a, p.b) || !adjacent(p.a, p.b, pc)) continue;
            PcBound b = pc_upper_bound(p.a, p.b, pc);
            REQUIRE(b.bound.has_value());
            CHECK(*b.bound == 1);
            ++n;
        }
    CHECK(n > 0);
}

TEST_CASE("inclusion of the curve graph is Lipschitz") {
    const EdgeRule pc = EdgeRule::parse("principal");
    for (SurfacePtr S : fixture::corpus_surfaces()) {
        int limit = small_surface(S->spec) ? 2 : 1;
        for (const Pair& p : disjoint_pairs(S, 10)) {
            PcBound b = pc_upper_bound(p.a, p.b, pc);
            REQUIRE(b.bound.has_value());
            CHECK(*b.bound <= limit);
        }
    }
}

TEST_CASE("principal stratum exactly when no principal edge") {
    const EdgeRule pc = EdgeRule::parse("principal");
    int principal = 0, total = 0;
    for (SurfacePtr S : fixture::corpus_surfaces())
        for (const Pair& p : fixture::binding_pairs(S, 60)) {
            RegionProfile prof = census(p.a, p.b);
            bool flag = stratum_signature(prof).principal;
            CHECK(flag == !adjacent(p.a, p.b, pc));
            CHECK(flag == (pc_distance_class(p.a, p.b, pc) == 2));
            principal += flag;
            ++total;
        }
    MESSAGE(principal << " principal of " << total);
    CHECK(total > 0);
}
