#include "pclab/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace pclab::io {

namespace {

[[noreturn]] void bad(const std::string& what) { fail("InvalidFormat", what); }

// Requires an object whose keys are exactly `required` plus any of `optional`.
void expect_keys(const json& j, const std::string& what, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional = {}, const std::string& code = "InvalidFormat") {
    if (!j.is_object()) fail(code, what + " must be a JSON object");
    std::set<std::string> allowed;
    for (const char* k : required) {
        allowed.insert(k);
        if (!j.contains(k)) fail(code, what + " is missing field '" + k + "'");
    }
    for (const char* k : optional) allowed.insert(k);
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) fail(code, what + " has unknown field '" + k + "'");
}

long get_long(const json& j, const std::string& what) {
    Int x = int_from_json(j, what);
    if (!x.fits_slong_p()) bad(what + " out of range");
    return x.get_si();
}

int get_int(const json& j, const std::string& what) {
    long x = get_long(j, what);
    if (x < INT32_MIN || x > INT32_MAX) bad(what + " out of range");
    return static_cast<int>(x);
}

bool get_bool(const json& j, const std::string& what) {
    if (!j.is_boolean()) bad(what + " must be a boolean");
    return j.get<bool>();
}

std::vector<int> get_ints(const json& j, const std::string& what) {
    if (!j.is_array()) bad(what + " must be an array");
    std::vector<int> out;
    for (const json& x : j) out.push_back(get_int(x, what));
    return out;
}

std::string get_string(const json& j, const std::string& what) {
    if (!j.is_string()) bad(what + " must be a string");
    return j.get<std::string>();
}

}  // namespace

json int_to_json(const Int& x) {
    if (x.fits_slong_p()) return json(x.get_si());
    return json(x.get_str());
}

Int int_from_json(const json& j, const std::string& what) {
    if (j.is_number_integer()) return Int(std::to_string(j.get<long long>()));
    if (j.is_number_unsigned()) return Int(std::to_string(j.get<unsigned long long>()));
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        Int x;
        bool digits = !s.empty() && s.find_first_not_of("-0123456789") == std::string::npos;
        if (!digits || x.set_str(s, 10) != 0) bad(what + " is not an integer");
        return x;
    }
    bad(what + " is not an integer");
}

json ints_to_json(const std::vector<Int>& v) {
    json a = json::array();
    for (const Int& x : v) a.push_back(int_to_json(x));
    return a;
}

std::vector<Int> ints_from_json(const json& j, const std::string& what) {
    if (!j.is_array()) bad(what + " must be an array");
    std::vector<Int> out;
    for (const json& x : j) out.push_back(int_from_json(x, what));
    return out;
}

json surface_to_json(const SurfaceSpec& s) { return json{{"g", s.genus}, {"m", s.punctures}}; }

SurfaceSpec surface_from_json(const json& j) {
    expect_keys(j, "surface", {"g", "m"});
    SurfaceSpec s{get_int(j["g"], "surface.g"), get_int(j["m"], "surface.m")};
    if (s.genus < 0 || s.punctures < 0) bad("surface genus and punctures must be nonnegative");
    return s;
}

json triangulation_to_json(const Surface& S) {
    const Triangulation& T = S.tri;
    json tris = json::array();
    for (const auto& t : T.triangles()) {
        json row = json::array();
        for (const Side& s : t) row.push_back(json{{"edge", s.edge}, {"fwd", s.fwd}});
        tris.push_back(row);
    }
    json punct = json::array();
    for (int v = 0; v < T.num_vertices(); ++v) punct.push_back(static_cast<bool>(S.vertex_is_puncture[v]));
    return json{{"surface", surface_to_json(S.spec)},
                {"triangulation", S.tag},
                {"triangles", tris.size()},
                {"edges", T.num_edges()},
                {"vertices", T.num_vertices()},
                {"euler_characteristic", S.spec.euler() - S.spec.punctures},
                {"vertex_is_puncture", punct},
                {"sides", tris}};
}

json curve_to_json(const NormalCurve& c) {
    return json{{"surface", surface_to_json(c.surface->spec)},
                {"triangulation", c.surface->tag},
                {"corner_counts", ints_to_json(c.corners)}};
}

NormalCurve curve_from_json(const json& j) {
    expect_keys(j, "curve", {"surface", "triangulation", "corner_counts"}, {}, "InvalidCurve");
    SurfaceSpec spec;
    try {
        spec = surface_from_json(j["surface"]);
    } catch (const Error& e) {
        fail("InvalidCurve", e.what());
    }
    if (!j["triangulation"].is_string() || j["triangulation"].get<std::string>() != kTriangulationTag)
        fail("InvalidCurve", "unknown triangulation tag");
    SurfacePtr S = build_surface(spec);
    std::vector<Int> cc;
    try {
        cc = ints_from_json(j["corner_counts"], "corner_counts");
    } catch (const Error& e) {
        fail("InvalidCurve", e.what());
    }
    NormalCurve c(S, std::move(cc));
    check_normal(c);
    if (is_small(c)) validate_curve(c);
    return c;
}

CurveResolver file_resolver(const std::filesystem::path& base_dir) {
    return [base_dir](const std::string& ref) {
        std::filesystem::path p(ref);
        if (p.is_relative()) p = base_dir / p;
        return curve_from_json(read_json_file(p));
    };
}

json mapping_class_to_json(const MappingClass& f) {
    json a = json::array();
    for (const TwistLetter& l : f.word) a.push_back(json{{"curve", curve_to_json(l.curve)}, {"power", l.power}});
    return a;
}

MappingClass mapping_class_from_json(const json& j, const CurveResolver& resolve, const SurfacePtr& surface) {
    if (!j.is_array()) bad("mapping class must be an array of twist letters");
    MappingClass f;
    f.surface = surface;
    for (const json& l : j) {
        expect_keys(l, "twist letter", {"curve", "power"});
        NormalCurve c;
        if (l["curve"].is_string()) {
            if (!resolve) bad("curve file references are not available here");
            c = resolve(l["curve"].get<std::string>());
        } else {
            c = curve_from_json(l["curve"]);
        }
        if (f.surface && f.surface->spec != c.surface->spec) fail("SurfaceMismatch", "twist curves live on different surfaces");
        f.surface = c.surface;
        long p = get_long(l["power"], "power");
        if (p != 0) f.word.push_back(TwistLetter{std::move(c), p});
    }
    if (!f.surface) bad("empty mapping class needs a surface");
    return f;
}

json measure_to_json(const StepMeasure& mu) {
    json a = json::array();
    for (std::size_t k = 0; k < mu.support.size(); ++k) {
        const MappingClass& f = mu.support[k];
        // a zero-power letter keeps the surface of an identity element
        json word = f.is_identity() ? json::array({json{{"curve", curve_to_json(short_curves(f.surface).at(0))}, {"power", 0}}})
                                    : mapping_class_to_json(f);
        a.push_back(json{{"mapping-class", word},
                         {"weight-numerator", int_to_json(mu.weights[k].get_num())},
                         {"weight-denominator", int_to_json(mu.weights[k].get_den())}});
    }
    return a;
}

StepMeasure measure_from_json(const json& j, const CurveResolver& resolve) {
    if (!j.is_array() || j.empty()) bad("measure must be a nonempty array");
    StepMeasure mu;
    SurfacePtr S;
    // identity elements carry no curve; take the surface from any other element
    for (const json& e : j) {
        expect_keys(e, "measure entry", {"mapping-class", "weight-numerator", "weight-denominator"});
        if (!S && e["mapping-class"].is_array() && !e["mapping-class"].empty())
            S = mapping_class_from_json(e["mapping-class"], resolve).surface;
    }
    if (!S) bad("measure has no curve to fix the surface; write the identity as a zero-power letter");
    for (const json& e : j) {
        mu.support.push_back(mapping_class_from_json(e["mapping-class"], resolve, S));
        Int num = int_from_json(e["weight-numerator"], "weight-numerator");
        Int den = int_from_json(e["weight-denominator"], "weight-denominator");
        if (den <= 0) fail("InvalidMeasure", "weight denominator must be positive");
        Rat w(num, den);
        w.canonicalize();
        mu.weights.push_back(w);
    }
    mu.validate();
    return mu;
}

json track_to_json(const TrainTrack& t) {
    json sw = json::array();
    for (const auto& s : t.switches) sw.push_back(json{{"N", s.side[0]}, {"P", s.side[1]}});
    json br = json::array();
    for (const auto& b : t.branches)
        br.push_back(json{{"ends", json::array({b.sw[0], b.sw[1]})},
                          {"word", b.word},
                          {"regions", json::array({b.region[0], b.region[1]})}});
    json rg = json::array();
    for (const auto& r : t.regions)
        rg.push_back(json{{"chi", r.chi}, {"punctures", r.punctures}, {"parent", r.parent}, {"dead", r.dead}});
    return json{{"format", kTrackFormat},
                {"surface", surface_to_json(t.surface->spec)},
                {"triangulation", t.surface->tag},
                {"switches", sw},
                {"branches", br},
                {"regions", rg}};
}

TrainTrack track_from_json(const json& j) {
    expect_keys(j, "track", {"format", "surface", "triangulation", "switches", "branches", "regions"});
    if (get_string(j["format"], "format") != kTrackFormat) bad("unknown track format tag");
    if (get_string(j["triangulation"], "triangulation") != kTriangulationTag) bad("unknown triangulation tag");
    TrainTrack t;
    t.surface = build_surface(surface_from_json(j["surface"]));
    if (!j["switches"].is_array() || !j["branches"].is_array() || !j["regions"].is_array())
        bad("track tables must be arrays");
    for (const json& s : j["switches"]) {
        expect_keys(s, "switch", {"N", "P"});
        TrainTrack::Switch sw;
        sw.side[0] = get_ints(s["N"], "switch.N");
        sw.side[1] = get_ints(s["P"], "switch.P");
        t.switches.push_back(std::move(sw));
    }
    int nsides = t.surface->tri.num_sides();
    for (const json& b : j["branches"]) {
        expect_keys(b, "branch", {"ends", "word", "regions"});
        TrainTrack::Branch br;
        auto ends = get_ints(b["ends"], "branch.ends");
        auto regs = get_ints(b["regions"], "branch.regions");
        if (ends.size() != 2 || regs.size() != 2) bad("branch ends and regions must be pairs");
        br.sw = {ends[0], ends[1]};
        br.region = {regs[0], regs[1]};
        br.word = get_ints(b["word"], "branch.word");
        for (int s : br.word)
            if (s < 0 || s >= nsides) bad("branch word has an invalid side");
        t.branches.push_back(std::move(br));
    }
    for (const json& r : j["regions"]) {
        expect_keys(r, "region", {"chi", "punctures", "parent", "dead"});
        TrainTrack::Region rg;
        rg.chi = get_int(r["chi"], "region.chi");
        rg.punctures = get_int(r["punctures"], "region.punctures");
        rg.parent = get_int(r["parent"], "region.parent");
        rg.dead = get_bool(r["dead"], "region.dead");
        t.regions.push_back(rg);
    }
    int nb = t.num_branches(), ns = t.num_switches(), nr = static_cast<int>(t.regions.size());
    std::vector<int> seen(2 * nb, 0);
    for (int s = 0; s < ns; ++s)
        for (int side = 0; side < 2; ++side)
            for (int h : t.switches[s].side[side]) {
                if (h < 0 || h >= 2 * nb) bad("switch lists an invalid half-branch");
                if (t.branches[h / 2].sw[h % 2] != s) bad("half-branch attached to the wrong switch");
                ++seen[h];
            }
    for (int h = 0; h < 2 * nb; ++h)
        if (seen[h] != 1) bad("every half-branch must appear on exactly one switch side");
    for (const auto& b : t.branches)
        for (int r : b.region)
            if (r < -1 || r >= nr) bad("branch names an invalid region");
    for (const auto& r : t.regions)
        if (r.parent < -1 || r.parent >= nr) bad("region parent out of range");
    return t;
}

bool same_track(const TrainTrack& a, const TrainTrack& b) {
    if (a.surface->spec != b.surface->spec || a.switches.size() != b.switches.size() ||
        a.branches.size() != b.branches.size() || a.regions.size() != b.regions.size())
        return false;
    for (std::size_t s = 0; s < a.switches.size(); ++s)
        if (a.switches[s].side != b.switches[s].side) return false;
    for (std::size_t k = 0; k < a.branches.size(); ++k) {
        const auto &x = a.branches[k], &y = b.branches[k];
        if (x.sw != y.sw || x.word != y.word || x.region != y.region) return false;
    }
    for (std::size_t r = 0; r < a.regions.size(); ++r) {
        const auto &x = a.regions[r], &y = b.regions[r];
        if (x.chi != y.chi || x.punctures != y.punctures || x.parent != y.parent || x.dead != y.dead) return false;
    }
    return true;
}

json certificate_to_json(const TrainTrack& t, const CarryingCertificate& c) {
    return json{{"format", kCertificateFormat},
                {"track", track_to_json(t)},
                {"curve", curve_to_json(c.curve)},
                {"weights", ints_to_json(c.weights)}};
}

std::pair<TrainTrack, CarryingCertificate> certificate_from_json(const json& j) {
    expect_keys(j, "certificate", {"format", "track", "curve", "weights"});
    if (get_string(j["format"], "format") != kCertificateFormat) bad("unknown certificate format tag");
    TrainTrack t = track_from_json(j["track"]);
    CarryingCertificate c{curve_from_json(j["curve"]), ints_from_json(j["weights"], "weights")};
    if (static_cast<int>(c.weights.size()) != t.num_branches()) bad("certificate weights do not match the branches");
    if (c.curve.surface->spec != t.surface->spec) fail("SurfaceMismatch", "certificate curve and track differ in surface");
    return {std::move(t), std::move(c)};
}

json faces_to_json(const RegionProfile& p) {
    json a = json::array();
    for (const FaceRecord& f : p.faces)
        a.push_back(json{{"region", f.region},
                         {"kind", kind_name(f.kind)},
                         {"sides", f.side_count},
                         {"euler_char", f.euler_char},
                         {"puncture_count", f.puncture_count},
                         {"puncture_vertices", f.puncture_vertices},
                         {"boundary", f.boundary}});
    return a;
}

std::vector<FaceRecord> faces_from_json(const json& j) {
    if (!j.is_array()) bad("faces must be an array");
    std::vector<FaceRecord> out;
    for (const json& x : j) {
        expect_keys(x, "face", {"region", "kind", "sides", "euler_char", "puncture_count", "puncture_vertices", "boundary"});
        FaceRecord f;
        f.region = get_int(x["region"], "face.region");
        std::string k = get_string(x["kind"], "face.kind");
        if (k == kind_name(FaceKind::Polygon)) f.kind = FaceKind::Polygon;
        else if (k == kind_name(FaceKind::PuncturedPolygon)) f.kind = FaceKind::PuncturedPolygon;
        else if (k == kind_name(FaceKind::Essential)) f.kind = FaceKind::Essential;
        else bad("unknown face kind '" + k + "'");
        f.side_count = get_int(x["sides"], "face.sides");
        f.euler_char = get_int(x["euler_char"], "face.euler_char");
        f.puncture_count = get_int(x["puncture_count"], "face.puncture_count");
        f.puncture_vertices = get_ints(x["puncture_vertices"], "face.puncture_vertices");
        if (!x["boundary"].is_array()) bad("face.boundary must be an array");
        for (const json& cyc : x["boundary"]) f.boundary.push_back(get_ints(cyc, "face.boundary"));
        out.push_back(std::move(f));
    }
    return out;
}

json profile_to_json(const RegionProfile& p) {
    return json{{"surface", surface_to_json(p.spec)},
                {"V", p.V},
                {"E", p.E},
                {"euler_checksum", p.euler_checksum},
                {"expected_checksum", p.spec.euler()},
                {"puncture_total", p.puncture_total},
                {"binds", p.binds},
                {"isotopic", p.isotopic},
                {"faces", faces_to_json(p)}};
}

json stratum_to_json(const StratumSignature& s) {
    json sing = json::array();
    for (const Singularity& x : s.singularities)
        sing.push_back(json{{"face", x.face}, {"at_puncture", x.at_puncture}, {"order", x.order}});
    return json{{"principal", s.principal}, {"order_sum", s.order_sum}, {"singularities", sing}};
}

json verdict_to_json(const EdgeVerdict& v, const EdgeRule& rule) {
    json faces = faces_to_json(v.profile);
    json witnesses = json::array();
    for (int k : v.witness_faces) witnesses.push_back(faces.at(k));
    return json{{"rule", rule.name()},
                {"adjacent", v.adjacent},
                {"intersection", int_to_json(v.intersection)},
                {"witness_faces", v.witness_faces},
                {"witnesses", witnesses},
                {"profile", profile_to_json(v.profile)}};
}

json pc_bound_to_json(const PcBound& b) {
    json chain = json::array();
    for (const NormalCurve& c : b.chain) chain.push_back(curve_to_json(c));
    json links = json::array();
    for (const ChainLink& l : b.links)
        links.push_back(l.kind == ChainLink::Carrier ? json{{"kind", "carrier"}, {"stage", l.carrier_stage}}
                                                     : json{{"kind", "predicate"}});
    return json{{"bound", b.bound ? json(*b.bound) : json(nullptr)},
                {"candidates", b.candidates},
                {"links", links},
                {"chain", chain}};
}

json graph_to_json(const OrbitGraph& g) {
    json verts = json::array();
    for (const NormalCurve& c : g.vertices) verts.push_back(c.surface ? curve_to_json(c) : json(nullptr));
    return json{{"format", kGraphFormat},
                {"rule", g.rule.name()},
                {"base", g.base},
                {"skipped_pairs", g.skipped_pairs},
                {"hash", std::to_string(g.hash())},
                {"vertices", verts},
                {"provenance", g.provenance},
                {"adjacency", g.adj}};
}

OrbitGraph graph_from_json(const json& j) {
    expect_keys(j, "graph", {"format", "rule", "base", "vertices", "provenance", "adjacency"}, {"skipped_pairs", "hash"});
    if (get_string(j["format"], "format") != kGraphFormat) bad("unknown graph format tag");
    OrbitGraph g;
    g.rule = EdgeRule::parse(get_string(j["rule"], "rule"));
    g.base = get_int(j["base"], "base");
    if (j.contains("skipped_pairs")) g.skipped_pairs = get_int(j["skipped_pairs"], "skipped_pairs");
    if (!j["vertices"].is_array() || !j["provenance"].is_array() || !j["adjacency"].is_array()) bad("graph tables must be arrays");
    for (const json& v : j["vertices"]) g.vertices.push_back(v.is_null() ? NormalCurve{} : curve_from_json(v));
    for (const json& p : j["provenance"]) g.provenance.push_back(get_ints(p, "provenance"));
    for (const json& a : j["adjacency"]) g.adj.push_back(get_ints(a, "adjacency"));
    int n = g.size();
    if (static_cast<int>(g.adj.size()) != n || static_cast<int>(g.provenance.size()) != n) bad("graph tables differ in length");
    for (int u = 0; u < n; ++u)
        for (int v : g.adj[u]) {
            if (v < 0 || v >= n || v == u) bad("adjacency names an invalid vertex");
            if (!std::binary_search(g.adj[v].begin(), g.adj[v].end(), u)) bad("adjacency is not symmetric and sorted");
        }
    if (j.contains("hash") && get_string(j["hash"], "hash") != std::to_string(g.hash())) bad("graph hash mismatch");
    return g;
}

json delta_to_json(const DeltaReport& r) {
    return json{{"delta", r.delta}, {"tuples", r.tuples}, {"exhaustive", r.exhaustive}, {"worst", r.worst},
                {"note", "window statistic from BFS distances inside the orbit graph, not a bound on the true constant"}};
}

json bottleneck_to_json(const BottleneckReport& r) {
    json pairs = json::array();
    for (const auto& p : r.pairs)
        pairs.push_back(json{{"u", p.u}, {"v", p.v}, {"distance", p.distance}, {"midpoint", p.midpoint}, {"deviation", p.deviation}});
    return json{{"max_deviation", r.max_deviation},
                {"mean_deviation", r.mean_deviation},
                {"histogram", r.histogram},
                {"exhaustive", r.exhaustive},
                {"pairs", pairs},
                {"note", "geodesics are BFS geodesics inside the finite window"}};
}

json orbit_growth_to_json(const OrbitGrowth& r) {
    json steps = json::array();
    for (std::size_t k = 0; k < r.orbit.size(); ++k) {
        json s{{"k", k},
               {"intersection", r.intersections[k] ? int_to_json(*r.intersections[k]) : json(nullptr)},
               {"pc_upper_bound", r.pc_bounds[k] ? json(*r.pc_bounds[k]) : json(nullptr)},
               {"total_weight", int_to_json(r.orbit[k].total_weight())}};
        if (r.carrier && r.carrier_verified) s["carrier_weights"] = ints_to_json(r.carrier->weights[k]);
        steps.push_back(std::move(s));
    }
    json out{{"steps", steps},
             {"witnessed_bounded", r.witnessed_bounded},
             {"diameter_bound", r.diameter_bound ? json(*r.diameter_bound) : json(nullptr)},
             {"carrier_verified", r.carrier_verified},
             {"carrier_maximal", r.carrier_maximal}};
    if (r.carrier && r.carrier_verified) out["carrier"] = track_to_json(r.carrier->track);
    return out;
}

json growth_to_json(const GrowthReport& r) {
    return json{{"intersections", ints_to_json(r.intersections)},
                {"log_intersections", r.logs},
                {"slope", r.slope},
                {"intercept", r.intercept},
                {"residuals", r.residuals},
                {"tail_slope", r.tail_slope},
                {"loglog_slope", r.loglog_slope},
                {"note", "slopes are least-squares fits (approximate)"}};
}

json convergence_to_json(const ConvergenceReport& r) {
    std::vector<bool> cauchy(r.cauchy.begin(), r.cauchy.end());
    return json{{"epsilon", r.epsilon},
                {"cauchy_fraction", r.cauchy_fraction},
                {"median_drift", r.median_drift},
                {"drift_ci95", json::array({r.ci_low, r.ci_high})},
                {"direction_dispersion", r.direction_dispersion},
                {"tail_spread", r.tail_spread},
                {"cauchy", cauchy},
                {"drifts", r.drifts},
                {"note", "drift and confidence interval are approximate (bootstrap)"}};
}

json log_moment_to_json(const LogMomentReport& r) {
    return json{{"distance_proxy", r.distances}, {"moment_plain", r.plain}, {"moment_logarithmic", r.logarithmic},
                {"note", "distances are curve graph proxies"}};
}

json error_to_json(const std::string& code, const std::string& message) {
    return json{{"error", code}, {"message", message}};
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
    double x = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) bad("invalid number '" + s + "' in CSV");
    return x;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string walk_to_csv(const WalkStats& ws) {
    std::size_t E = 0;
    for (const auto& p : ws.paths)
        if (!p.projective.empty()) E = p.projective[0].size();
    std::ostringstream o;
    o << kWalkCsvHeader << " steps=" << ws.steps << " paths=" << ws.paths.size() << " seed=" << ws.seed
      << " coordinates=" << E << "\n";
    o << "path,step,increment,intersection,log_intersection,cg_proxy,pc_bound";
    for (std::size_t e = 0; e < E; ++e) o << ",p" << e;
    o << "\n";
    for (std::size_t p = 0; p < ws.paths.size(); ++p) {
        const PathStats& P = ws.paths[p];
        for (int n = 0; n <= ws.steps; ++n) {
            o << p << "," << n << ",";
            if (n > 0) o << P.increments[n - 1];
            o << "," << P.intersections[n].get_str() << "," << format_double(P.log_intersections[n]) << ","
              << format_double(P.cg_proxy[n]) << ",";
            if (P.pc_bound[n]) o << *P.pc_bound[n];
            int t = n - P.projective_from;
            for (std::size_t e = 0; e < E; ++e) {
                o << ",";
                if (t >= 0) o << format_double(P.projective[t][e]);
            }
            o << "\n";
        }
    }
    return o.str();
}

WalkStats walk_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind(kWalkCsvHeader, 0) != 0) bad("missing walk CSV version header");
    WalkStats ws;
    long paths = -1, E = -1;
    {
        std::istringstream h(line.substr(std::string(kWalkCsvHeader).size()));
        std::string kv;
        while (h >> kv) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) bad("malformed walk CSV header");
            std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
            Int x;
            if (x.set_str(v, 10) != 0) bad("malformed walk CSV header value");
            if (k == "steps") ws.steps = static_cast<int>(x.get_si());
            else if (k == "paths") paths = x.get_si();
            else if (k == "seed") ws.seed = std::stoull(v);
            else if (k == "coordinates") E = x.get_si();
            else bad("unknown walk CSV header key '" + k + "'");
        }
    }
    if (ws.steps < 1 || paths < 0 || E < 0) bad("incomplete walk CSV header");
    if (!std::getline(in, line)) bad("missing walk CSV column header");
    std::string expected = "path,step,increment,intersection,log_intersection,cg_proxy,pc_bound";
    for (long e = 0; e < E; ++e) expected += ",p" + std::to_string(e);
    if (line != expected) bad("unexpected walk CSV columns");
    ws.paths.resize(paths);
    for (long p = 0; p < paths; ++p) {
        PathStats& P = ws.paths[p];
        P.projective_from = ws.steps - ws.steps / 4;
        for (int n = 0; n <= ws.steps; ++n) {
            if (!std::getline(in, line)) bad("walk CSV is truncated");
            auto f = split_csv(line);
            if (static_cast<long>(f.size()) != 7 + E) bad("walk CSV row has the wrong number of fields");
            if (f[0] != std::to_string(p) || f[1] != std::to_string(n)) bad("walk CSV rows out of order");
            if (n > 0) P.increments.push_back(static_cast<int>(parse_double(f[2])));
            else if (!f[2].empty()) bad("step 0 has no increment");
            Int i;
            if (i.set_str(f[3], 10) != 0) bad("invalid intersection in walk CSV");
            P.intersections.push_back(i);
            P.log_intersections.push_back(parse_double(f[4]));
            P.cg_proxy.push_back(parse_double(f[5]));
            P.pc_bound.push_back(f[6].empty() ? std::nullopt : std::optional<int>(static_cast<int>(parse_double(f[6]))));
            if (n >= P.projective_from && E > 0) {
                std::vector<double> x;
                for (long e = 0; e < E; ++e) x.push_back(parse_double(f[7 + e]));
                P.projective.push_back(std::move(x));
            }
        }
    }
    if (std::getline(in, line) && !line.empty()) bad("trailing rows in walk CSV");
    return ws;
}

namespace {

std::string fx(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string o;
    for (char ch : s) {
        if (ch == '<') o += "&lt;";
        else if (ch == '>') o += "&gt;";
        else if (ch == '&') o += "&amp;";
        else o += ch;
    }
    return o;
}

}  // namespace

std::string svg_histogram(const std::vector<int>& counts, const std::string& title, const std::string& xlabel) {
    const double W = 480, H = 320, L = 50, B = 40, T = 30, R = 20;
    int top = 1;
    for (int c : counts) top = std::max(top, c);
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    o << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << escape_xml(title) << "</text>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    double n = std::max<std::size_t>(counts.size(), 1);
    double bw = (W - L - R) / n;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        double h = (H - B - T) * counts[k] / top;
        double x = L + bw * static_cast<double>(k);
        o << "<rect x=\"" << fx(x + 1) << "\" y=\"" << fx(H - B - h) << "\" width=\"" << fx(bw - 2) << "\" height=\""
          << fx(h) << "\" fill=\"steelblue\"/>\n";
        o << "<text x=\"" << fx(x + bw / 2) << "\" y=\"" << H - B + 15 << "\" text-anchor=\"middle\">" << k << "</text>\n";
        o << "<text x=\"" << fx(x + bw / 2) << "\" y=\"" << fx(H - B - h - 4) << "\" text-anchor=\"middle\">" << counts[k]
          << "</text>\n";
    }
    o << "<text x=\"" << W / 2 << "\" y=\"" << H - 5 << "\" text-anchor=\"middle\">" << escape_xml(xlabel) << "</text>\n";
    o << "</svg>\n";
    return o.str();
}

std::string svg_drift_plot(const WalkStats& ws, double median_drift) {
    const double W = 640, H = 400, L = 60, B = 40, T = 30, R = 20;
    double top = 1;
    for (const auto& p : ws.paths)
        for (double y : p.log_intersections) top = std::max(top, y);
    auto X = [&](double n) { return L + (W - L - R) * n / std::max(ws.steps, 1); };
    auto Y = [&](double y) { return H - B - (H - B - T) * y / top; };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    o << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">log(1 + i(c0, w_n c0)) per path; dashed: median drift "
      << fx(median_drift) << " per step</text>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (const auto& p : ws.paths) {
        o << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-opacity=\"0.3\" points=\"";
        for (std::size_t n = 0; n < p.log_intersections.size(); ++n)
            o << (n ? " " : "") << fx(X(static_cast<double>(n))) << "," << fx(Y(p.log_intersections[n]));
        o << "\"/>\n";
    }
    double end = std::min(top, median_drift * ws.steps);
    double n_end = median_drift > 0 ? end / median_drift : ws.steps;
    o << "<line x1=\"" << fx(X(0)) << "\" y1=\"" << fx(Y(0)) << "\" x2=\"" << fx(X(n_end)) << "\" y2=\"" << fx(Y(end))
      << "\" stroke=\"firebrick\" stroke-dasharray=\"6,4\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"" << H - 5 << "\" text-anchor=\"middle\">step n (0.." << ws.steps << ")</text>\n";
    o << "<text x=\"15\" y=\"" << H / 2 << "\" transform=\"rotate(-90 15 " << H / 2 << ")\" text-anchor=\"middle\">max "
      << fx(top) << "</text>\n";
    o << "</svg>\n";
    return o.str();
}

json read_json_file(const std::filesystem::path& p) {
    std::string text = read_text_file(p);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        bad(p.string() + ": " + e.what());
    }
}

std::string read_text_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) fail("IoError", "cannot read " + p.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_text_file(const std::filesystem::path& p, const std::string& text) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) fail("IoError", "cannot write " + p.string());
    out << text;
    if (!out) fail("IoError", "write failed for " + p.string());
}

}  // namespace pclab::io
