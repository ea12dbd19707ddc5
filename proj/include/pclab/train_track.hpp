#pragma once

#include "pclab/regions.hpp"

#include <optional>

namespace pclab {

// Train track on the surface. Half-branch id hb = 2*branch + end. Each switch has two
// sides (0 = N, 1 = P); both lists are ordered left to right when facing the + direction.
// Branch words run from the switch at end 0 to the switch at end 1 (switches are points
// inside triangles). region[0] / region[1] are the complementary regions on the left /
// right of a branch traversed from end 0 to end 1.
struct TrainTrack {
    struct Switch {
        std::array<std::vector<int>, 2> side;
    };
    struct Branch {
        std::array<int, 2> sw{-1, -1};
        Word word;
        std::array<int, 2> region{-1, -1};
    };
    struct Region {
        int chi = 1;
        int punctures = 0;
        int parent = -1;  // union-find; -1 for a root
        bool dead = false;
    };

    SurfacePtr surface;
    std::vector<Switch> switches;
    std::vector<Branch> branches;
    std::vector<Region> regions;

    int num_branches() const { return static_cast<int>(branches.size()); }
    int num_switches() const { return static_cast<int>(switches.size()); }
    int find_region(int r) const;
    bool generic() const;
};

using Weights = std::vector<Int>;

struct HalfPos {
    int sw = -1, side = -1, idx = -1;
};
HalfPos locate(const TrainTrack& t, int hb);

struct TrackRegion {
    int id = -1;
    int chi = 0;
    int punctures = 0;
    int cycles = 0;
    int cusps = 0;
};
std::vector<TrackRegion> track_census(const TrainTrack& t);
bool is_maximal(const TrainTrack& t);
// Structural problems: malformed switches, forbidden complementary regions.
std::vector<std::string> track_violations(const TrainTrack& t);

bool switch_conditions_hold(const TrainTrack& t, const std::vector<Rat>& w);
bool switch_conditions_hold(const TrainTrack& t, const Weights& w);

struct CarryingCertificate {
    NormalCurve curve;
    Weights weights;
};

// Carried (multi)curve for integral weights. Small weights are traced strand by strand;
// large weights use branch edge counts corrected by the cancellations at every junction.
NormalCurve reconstruct(const TrainTrack& t, const Weights& w);
NormalCurve reconstruct_by_counts(const TrainTrack& t, const Weights& w);
bool is_efficient(const TrainTrack& t);
bool verify_certificate(const TrainTrack& t, const CarryingCertificate& cert);

// Extreme rays of the transverse-measure cone, as primitive integral vectors in canonical order.
std::vector<Weights> extreme_rays(const TrainTrack& t);
std::vector<NormalCurve> vertex_cycles(const TrainTrack& t);
bool is_recurrent(const TrainTrack& t);
// Extremality of a nonnegative solution: rank of the switch matrix on its support is |support| - 1.
bool is_extreme(const TrainTrack& t, const Weights& w);
// The vertex cycle chosen for a track: a shortest closed train path reduced to an extreme ray.
Weights chosen_vertex_ray(const TrainTrack& t);
NormalCurve chosen_vertex_cycle(const TrainTrack& t);

struct IntersectionWitness {
    int c_dart = -1;        // c-edge I of the reduced map c u d that survives in the track
    int face = -1;          // face C containing I in its boundary
    int other_face = -1;    // face C' across I
};

struct OneSwitchResult {
    TrainTrack track;
    CarryingCertificate certificate;
    IntersectionWitness witness;
    int collapsed_bigons = 0;
};

OneSwitchResult one_switch_track(const NormalCurve& c, const NormalCurve& d);
OneSwitchResult one_switch_track(const NormalCurve& c, const NormalCurve& d, const PairMap& g,
                                 const RegionProfile& profile);

// Penner-type track from the reduced map of a binding pair: every crossing is smoothed into a
// short branch between two switches. type 0 puts cusps at the corners (a-dart, next ccw b-dart).
struct PennerTrack {
    TrainTrack track;
    Weights weight_a, weight_b;
    std::vector<int> dart_branch;  // branch of the edge at each dart; empty once bigons are collapsed
};
PennerTrack penner_track(const PairMap& g, int type, bool collapse = true);

// Common carrier for the orbit of a under phi = T_a T_b^{-1}: the bigon-collapsed Penner
// track of (a, b) with weights of phi^k(a), k = 0..n, from the linear action of the twists.
// The smoothing is the one reproducing phi(a) and phi^2(a); NoCarrier if neither does.
struct PennerOrbit {
    TrainTrack track;
    std::vector<Weights> weights;
    int type = 0;
};
PennerOrbit penner_orbit(const NormalCurve& a, const NormalCurve& b, int n);

// Bigon faces are collapsed by folding; every weight vector follows. Returns the count.
int collapse_track_bigons(TrainTrack& t, const std::vector<Weights*>& ws);

// Weights w >= 0 on t whose carried curve is c, via an exact linear solve on an efficient
// track; empty when no such weights exist.
std::optional<Weights> solve_carried(const TrainTrack& t, const NormalCurve& c);

// Comb every switch into trivalent form and merge bivalent switches; weights follow.
TrainTrack make_generic(const TrainTrack& t, Weights& w);
TrainTrack remove_zero_branches(const TrainTrack& t, Weights& w);
// Isotopes switches across triangle sides to remove backtracking junctions; returns the move count.
int tighten(TrainTrack& t, int max_moves = 100000);
bool is_large(const TrainTrack& t, int branch);

struct SplitOutcome {
    TrainTrack track;
    CarryingCertificate guide;
    enum Kind { Left, Right, Central } kind = Left;
};
SplitOutcome split(const TrainTrack& t, int branch, const CarryingCertificate& guide);

struct SplitStage {
    TrainTrack track;
    CarryingCertificate guide;
    NormalCurve vertex_cycle;
    bool maximal = false;
};
// Guided splits until the track is the guide curve itself.
std::vector<SplitStage> splitting_sequence(const TrainTrack& t, const CarryingCertificate& guide,
                                           bool with_vertex_cycles = true, int max_stages = 100000);

bool is_closed_curve_track(const TrainTrack& t);

}  // namespace pclab
