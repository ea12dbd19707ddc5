#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "pclab/io.hpp"

#include <algorithm>

using namespace pclab;
using fixture::Pair;

namespace {

// Weight carried through the single switch: the number of times a carried curve crosses it.
Int switch_load(const TrainTrack& t, const Weights& w) {
    Int s = 0;
    for (int h : t.switches[0].side[0]) s += w[h / 2];
    return s;
}

std::vector<std::vector<Int>> sorted_rays(std::vector<Weights> r) {
    std::sort(r.begin(), r.end());
    return r;
}

// Tracks with at most `max_branches` branches from one-switch constructions and their splits.
std::vector<TrainTrack> corpus_tracks(int per_surface, int max_branches) {
    std::vector<TrainTrack> out;
    for (SurfacePtr S : fixture::corpus_surfaces())
        for (const Pair& p : fixture::binding_pairs(S, per_surface)) {
            OneSwitchResult R = one_switch_track(p.a, p.b);
            if (R.track.num_branches() <= max_branches) out.push_back(R.track);
            auto seq = splitting_sequence(R.track, R.certificate, false, 400);
            for (std::size_t i = 0; i < seq.size(); i += 3)
                if (seq[i].track.num_branches() <= max_branches) out.push_back(seq[i].track);
        }
    return out;
}

}  // namespace

TEST_CASE("one-switch track postconditions on binding pairs") {
    int checked = 0;
    for (SurfacePtr S : fixture::corpus_surfaces())
        for (const Pair& p : fixture::binding_pairs(S, 60)) {
            OneSwitchResult R = one_switch_track(p.a, p.b);
            const TrainTrack& t = R.track;
            CHECK(t.num_switches() == 1);
            CHECK(track_violations(t).empty());
            CHECK(R.certificate.curve.same_coordinates(p.b));
            CHECK(switch_conditions_hold(t, R.certificate.weights));
            CHECK(verify_certificate(t, R.certificate));
            NormalCurve r = reconstruct(t, R.certificate.weights);
            if (S->spec.closed()) CHECK(same_curve(r, p.b));
            else CHECK(r.same_coordinates(p.b));
            CHECK(is_recurrent(t));
            // c crosses the track once, at the switch
            CHECK(switch_load(t, R.certificate.weights) == geometric_intersection(p.a, p.b));
            CHECK(R.witness.c_dart % 2 == 0);
            CHECK(R.witness.face >= 0);
            ++checked;
        }
    CHECK(checked == 240);
}

TEST_CASE("one-switch track needs a binding pair") {
    SurfacePtr S = build_surface(2, 0);
    Pair p = fixture::pair_with_intersection(S, 1);
    CHECK_THROWS_WITH_AS(one_switch_track(p.a, p.b), doctest::Contains("bind"), Error);
    try {
        one_switch_track(p.a, p.b);
    } catch (const Error& e) {
        CHECK(e.code() == "NotBinding");
    }
}

TEST_CASE("one-switch tracks of principal neighbours are not maximal") {
    const EdgeRule pc = EdgeRule::parse("principal");
    int adjacent_pairs = 0, maximal = 0;
    for (SurfacePtr S : fixture::corpus_surfaces())
        for (const Pair& p : fixture::binding_pairs(S, 60)) {
            bool m = is_maximal(one_switch_track(p.a, p.b).track);
            if (pc_distance_class(p.a, p.b, pc) == 1) {
                ++adjacent_pairs;
                CHECK_FALSE(m);
            }
            maximal += m;
        }
    CHECK(adjacent_pairs > 0);
    MESSAGE("maximal one-switch tracks: " << maximal);
}

// The region across the arc I merges two faces of c u d; a 2k-gon and a 2l-gon give a
// (k + l - 2)-cusped region, so the track is maximal only with a fourgon across I.
TEST_CASE("principal binding pairs yield maximal one-switch tracks when a fourgon meets a hexagon") {
    Pair p5 = fixture::principal_pair(5);
    CHECK(is_maximal(one_switch_track(p5.a, p5.b).track));
    Pair p4 = fixture::principal_pair(4);
    for (const FaceRecord& f : census(p4.a, p4.b).faces) CHECK(f.side_count != 4);
    CHECK_FALSE(is_maximal(one_switch_track(p4.a, p4.b).track));
    int principal = 0, maximal = 0;
    for (SurfacePtr S : fixture::corpus_surfaces())
        for (const Pair& p : fixture::binding_pairs(S, 150)) {
            PairMap g = minimal_pair(p.a, p.b);
            RegionProfile prof = trace_regions(g);
            if (!stratum_signature(prof).principal) continue;
            ++principal;
            OneSwitchResult R = one_switch_track(p.a, p.b, g, prof);
            int across = -1;
            for (const FaceRecord& f : prof.faces)
                if (f.region == R.witness.other_face) across = f.side_count;
            bool m = is_maximal(R.track);
            maximal += m;
            CHECK(m == (across == 4));
            if (!m) continue;
            for (const TrackRegion& r : track_census(R.track)) {
                bool trigon = r.chi == 1 && r.punctures == 0 && r.cusps == 3;
                bool monogon = r.chi == 1 && r.punctures == 1 && r.cusps == 1;
                CHECK((trigon || monogon));
            }
        }
    MESSAGE(maximal << " maximal of " << principal << " principal pairs");
    CHECK(maximal > 0);
}

TEST_CASE("vertex cycles agree with the double-description oracle") {
    auto tracks = corpus_tracks(8, 20);
    REQUIRE(tracks.size() > 20);
    for (const TrainTrack& t : tracks) {
        auto rays = extreme_rays(t);
        auto dd = oracle::dd_extreme_rays(oracle::switch_rows(t), t.num_branches());
        CHECK(sorted_rays(rays) == dd);
        auto cycles = vertex_cycles(t);
        REQUIRE(cycles.size() == rays.size());
        for (std::size_t i = 0; i < rays.size(); ++i) {
            for (const Int& x : rays[i]) CHECK(x <= 2);
            CHECK(switch_conditions_hold(t, rays[i]));
            CHECK(is_extreme(t, rays[i]));
            CHECK(cycles[i].same_coordinates(reconstruct(t, rays[i])));
            CHECK_NOTHROW(validate_curve(cycles[i]));
        }
    }
}

TEST_CASE("vertex cycles have uniformly bounded mutual intersection") {
    Int worst = 0;
    for (const TrainTrack& t : corpus_tracks(3, 20)) {
        auto cycles = vertex_cycles(t);
        for (std::size_t i = 0; i < cycles.size(); ++i)
            for (std::size_t j = i + 1; j < cycles.size(); ++j)
                worst = std::max(worst, geometric_intersection(cycles[i], cycles[j]));
    }
    MESSAGE("largest vertex-cycle intersection: " << worst.get_str());
    CHECK(worst >= 0);
}

TEST_CASE("a branch forced to zero makes the track non-recurrent") {
    TrainTrack t;
    t.surface = build_surface(1, 2);
    t.switches.resize(1);
    t.branches.resize(2);
    for (auto& b : t.branches) b.sw = {0, 0};
    t.switches[0].side[0] = {0, 1, 2};
    t.switches[0].side[1] = {3};
    CHECK_FALSE(is_recurrent(t));
    auto dd = oracle::dd_extreme_rays(oracle::switch_rows(t), 2);
    REQUIRE(dd.size() == 1);
    CHECK(dd[0][0] == 0);
    CHECK_THROWS_WITH_AS(vertex_cycles(t), doctest::Contains("positive"), Error);
}

TEST_CASE("guided splitting ends at the guide curve") {
    const EdgeRule pc = EdgeRule::parse("principal");
    int sequences = 0, nonmax_checked = 0;
    for (SurfacePtr S : fixture::corpus_surfaces())
        for (const Pair& p : fixture::binding_pairs(S, 5)) {
            OneSwitchResult R = one_switch_track(p.a, p.b);
            auto seq = splitting_sequence(R.track, R.certificate);
            REQUIRE(!seq.empty());
            ++sequences;
            bool all_nonmax = !is_maximal(R.track);
            for (const SplitStage& st : seq) {
                CHECK(st.guide.curve.same_coordinates(p.b));
                CHECK(switch_conditions_hold(st.track, st.guide.weights));
                // normal coordinates are canonical only when the vertices are punctures
                NormalCurve r = reconstruct(st.track, st.guide.weights);
                if (S->spec.closed()) CHECK(same_curve(r, p.b));
                else CHECK(r.same_coordinates(p.b));
                CHECK(st.maximal == is_maximal(st.track));
                all_nonmax = all_nonmax && !st.maximal;
            }
            const TrainTrack& last = seq.back().track;
            CHECK(is_closed_curve_track(last));
            if (!all_nonmax) continue;
            for (const SplitStage& st : seq) {
                if (same_curve(st.vertex_cycle, p.b)) continue;
                if (!explicit_feasible(st.vertex_cycle, p.b, ExplicitLimits{4000000})) continue;
                CHECK(pc_distance_class(st.vertex_cycle, p.b, pc) <= 1);
                ++nonmax_checked;
            }
        }
    CHECK(sequences == 20);
    MESSAGE("stage vertex cycles checked against the guide: " << nonmax_checked);
}

TEST_CASE("closed-curve track") {
    Pair p = fixture::binding_pairs(build_surface(1, 2), 1).front();
    OneSwitchResult R = one_switch_track(p.a, p.b);
    auto seq = splitting_sequence(R.track, R.certificate);
    const TrainTrack& t = seq.back().track;
    REQUIRE(is_closed_curve_track(t));
    CHECK(is_recurrent(t));
    CHECK_FALSE(is_maximal(t));
    auto cycles = vertex_cycles(t);
    REQUIRE(cycles.size() == 1);
    CHECK(same_curve(cycles[0], p.b));
    CHECK(splitting_sequence(t, seq.back().guide).empty());
    for (int b = 0; b < t.num_branches(); ++b) {
        try {
            split(t, b, seq.back().guide);
            FAIL("split a closed-curve track");
        } catch (const Error& e) {
            CHECK(e.code() == "NotLargeBranch");
        }
    }
}

TEST_CASE("sequence length grows with the twist power") {
    Pair p = fixture::octagon_pair();
    std::vector<std::size_t> lengths;
    for (int n = 1; n <= 3; ++n) {
        NormalCurve d = twist(p.a, p.b, n);
        if (!fixture::is_binding({p.b, d})) continue;
        OneSwitchResult R = one_switch_track(p.b, d);
        auto seq = splitting_sequence(R.track, R.certificate, false);
        CHECK(is_closed_curve_track(seq.back().track));
        lengths.push_back(seq.size());
        MESSAGE("twist power " << n << ": " << seq.size() << " splits");
    }
    CHECK(!lengths.empty());
}

TEST_CASE("tracks and certificates round-trip through JSON") {
    for (SurfacePtr S : fixture::corpus_surfaces()) {
        Pair p = fixture::binding_pairs(S, 1).front();
        OneSwitchResult R = one_switch_track(p.a, p.b);
        auto j = io::track_to_json(R.track);
        CHECK(j["format"] == io::kTrackFormat);
        TrainTrack back = io::track_from_json(io::json::parse(j.dump()));
        CHECK(io::same_track(back, R.track));
        CHECK(is_maximal(back) == is_maximal(R.track));
        auto [t2, cert] = io::certificate_from_json(io::json::parse(io::certificate_to_json(R.track, R.certificate).dump()));
        CHECK(io::same_track(t2, R.track));
        CHECK(cert.weights == R.certificate.weights);
        CHECK(cert.curve.same_coordinates(p.b));
        CHECK(verify_certificate(t2, cert));
    }
    Pair p = fixture::binding_pairs(build_surface(2, 0), 1).front();
    io::json bad = io::track_to_json(one_switch_track(p.a, p.b).track);
    bad["format"] = "other";
    CHECK_THROWS_AS(io::track_from_json(bad), Error);
}
