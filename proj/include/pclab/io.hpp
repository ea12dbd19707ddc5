#pragma once

#include "pclab/explorer.hpp"
#include "pclab/walk.hpp"

#include "json.hpp"

#include <filesystem>
#include <functional>

namespace pclab::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kTriangulationTag = "canonical-v1";
inline constexpr const char* kTrackFormat = "pclab-track-v1";
inline constexpr const char* kCertificateFormat = "pclab-certificate-v1";
inline constexpr const char* kGraphFormat = "pclab-graph-v1";
inline constexpr const char* kWalkCsvHeader = "# pclab-walk-csv v1";

// Integers are JSON numbers when they fit in 64 bits and decimal strings otherwise.
json int_to_json(const Int& x);
Int int_from_json(const json& j, const std::string& what);
json ints_to_json(const std::vector<Int>& v);
std::vector<Int> ints_from_json(const json& j, const std::string& what);

json surface_to_json(const SurfaceSpec& s);
SurfaceSpec surface_from_json(const json& j);
// Full description of the canonical triangulation (for the surface subcommand).
json triangulation_to_json(const Surface& S);

json curve_to_json(const NormalCurve& c);
// Rejects unknown fields and triangulation tags; throws InvalidCurve naming the invariant.
NormalCurve curve_from_json(const json& j);

// File references inside mapping classes resolve through this callback.
using CurveResolver = std::function<NormalCurve(const std::string&)>;
CurveResolver file_resolver(const std::filesystem::path& base_dir);

json mapping_class_to_json(const MappingClass& f);
MappingClass mapping_class_from_json(const json& j, const CurveResolver& resolve = {},
                                     const SurfacePtr& surface = nullptr);

json measure_to_json(const StepMeasure& mu);
StepMeasure measure_from_json(const json& j, const CurveResolver& resolve = {});

json track_to_json(const TrainTrack& t);
TrainTrack track_from_json(const json& j);
bool same_track(const TrainTrack& a, const TrainTrack& b);

json certificate_to_json(const TrainTrack& t, const CarryingCertificate& c);
std::pair<TrainTrack, CarryingCertificate> certificate_from_json(const json& j);

// Face records as a JSON array.
json faces_to_json(const RegionProfile& p);
std::vector<FaceRecord> faces_from_json(const json& j);
json profile_to_json(const RegionProfile& p);  // census summary plus the face array
json stratum_to_json(const StratumSignature& s);
json verdict_to_json(const EdgeVerdict& v, const EdgeRule& rule);
json pc_bound_to_json(const PcBound& b);

json graph_to_json(const OrbitGraph& g);
OrbitGraph graph_from_json(const json& j);
json delta_to_json(const DeltaReport& r);
json bottleneck_to_json(const BottleneckReport& r);
json orbit_growth_to_json(const OrbitGrowth& r);
json growth_to_json(const GrowthReport& r);
json convergence_to_json(const ConvergenceReport& r);
json log_moment_to_json(const LogMomentReport& r);

json error_to_json(const std::string& code, const std::string& message);

// Shortest round-trip decimal form, independent of locale.
std::string format_double(double x);

// One row per path and step; projective columns are empty outside the tail window.
std::string walk_to_csv(const WalkStats& ws);
WalkStats walk_from_csv(const std::string& text);

std::string svg_histogram(const std::vector<int>& counts, const std::string& title, const std::string& xlabel);
std::string svg_drift_plot(const WalkStats& ws, double median_drift);

json read_json_file(const std::filesystem::path& p);
std::string read_text_file(const std::filesystem::path& p);
void write_text_file(const std::filesystem::path& p, const std::string& text);

}  // namespace pclab::io
