#include "pclab/flips.hpp"
#include "pclab/io.hpp"

#include "CLI11.hpp"

#include <optional>
#include <cmath>
#include <cstdlib>
#include <iostream>

using namespace pclab;
using io::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    int jobs = 0;
    std::string out;
    std::optional<std::uint64_t> seed;
};

std::optional<std::uint64_t> given_seed(const Globals& g) {
    if (g.seed) return *g.seed;
    if (const char* env = std::getenv("PCLAB_SEED")) {
        std::string s(env);
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw UsageError("PCLAB_SEED must be a nonnegative integer");
        return std::stoull(s);
    }
    return std::nullopt;
}

std::uint64_t require_seed(const Globals& g) {
    if (auto s = given_seed(g)) return *s;
    throw UsageError("this subcommand is stochastic: pass --seed or set PCLAB_SEED");
}

void emit_text(const Globals& g, const std::string& text) {
    if (g.out.empty()) std::cout << text;
    else io::write_text_file(g.out, text);
}

void emit(const Globals& g, const json& j) { emit_text(g, j.dump(2) + "\n"); }

NormalCurve load_curve(const std::string& path) { return io::curve_from_json(io::read_json_file(path)); }

MappingClass load_mapping_class(const std::string& path) {
    fs::path p(path);
    return io::mapping_class_from_json(io::read_json_file(p), io::file_resolver(p.parent_path()));
}

void add_rule(CLI::App* sub, std::string& rule) {
    sub->add_option("--rule", rule, "edge rule: cg | cg0 | principal | principal6 | intermediate")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pclab: curves, train tracks and mapping classes on punctured surfaces"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals G;
    std::uint64_t seed_opt = 0;
    app.add_option("--jobs", G.jobs, "worker threads (0 = all cores); results never depend on it");
    app.add_option("--out", G.out, "write the result to this file instead of stdout");
    auto* seed_flag = app.add_option("--seed", seed_opt, "master seed for stochastic subcommands (fallback: PCLAB_SEED)");
    std::function<void()> action;

    // surface
    int sg = 0, sm = 0;
    auto* surface = app.add_subcommand("surface", "print the canonical triangulation of S_{g,m}");
    surface->add_option("--g", sg, "genus")->required();
    surface->add_option("--m", sm, "punctures")->required();
    surface->callback([&] { action = [&] { emit(G, io::triangulation_to_json(*build_surface(sg, sm))); }; });

    // curve helpers
    auto* curve = app.add_subcommand("curve", "curve helpers");
    curve->require_subcommand(1);
    int cg = 0, cm = 0, cbound = 2;
    auto* crandom = curve->add_subcommand("random", "random essential simple closed curve");
    crandom->add_option("--g", cg, "genus")->required();
    crandom->add_option("--m", cm, "punctures")->required();
    crandom->add_option("--bound", cbound, "bound on edge weights")->capture_default_str();
    crandom->callback([&] {
        action = [&] { emit(G, io::curve_to_json(random_curve(build_surface(cg, cm), require_seed(G), cbound))); };
    });
    auto* cshort = curve->add_subcommand("short", "the canonical short curves");
    cshort->add_option("--g", cg, "genus")->required();
    cshort->add_option("--m", cm, "punctures")->required();
    cshort->callback([&] {
        action = [&] {
            json a = json::array();
            for (const NormalCurve& c : short_curves(build_surface(cg, cm))) a.push_back(io::curve_to_json(c));
            emit(G, a);
        };
    });
    std::string ccurve, cmc;
    long cpower = 1;
    auto* ctwist = curve->add_subcommand("twist", "write the one-letter mapping class T_c^power");
    ctwist->add_option("curve", ccurve, "curve file")->required();
    ctwist->add_option("--power", cpower, "twist power")->capture_default_str();
    ctwist->callback([&] {
        action = [&] { emit(G, io::mapping_class_to_json(MappingClass::twist(load_curve(ccurve), cpower))); };
    });

    // pair commands
    std::string fa, fb, rule = "principal";
    auto pair_args = [&](CLI::App* sub) {
        sub->add_option("a", fa, "first curve file")->required();
        sub->add_option("b", fb, "second curve file")->required();
    };
    auto* intersect = app.add_subcommand("intersect", "geometric intersection number");
    pair_args(intersect);
    intersect->callback([&] {
        action = [&] {
            emit(G, json{{"intersection", io::int_to_json(geometric_intersection(load_curve(fa), load_curve(fb)))}});
        };
    });
    auto* regions = app.add_subcommand("regions", "complementary regions of a pair in minimal position");
    pair_args(regions);
    regions->callback([&] {
        action = [&] {
            NormalCurve a = load_curve(fa), b = load_curve(fb);
            RegionProfile p = census(a, b);
            json out = io::profile_to_json(p);
            out["checksum_ok"] = p.euler_checksum == p.spec.euler();
            if (p.binds) out["stratum"] = io::stratum_to_json(stratum_signature(p));
            emit(G, out);
        };
    });
    auto* edge = app.add_subcommand("edge", "adjacency verdict under an edge rule");
    pair_args(edge);
    add_rule(edge, rule);
    edge->callback([&] {
        action = [&] {
            EdgeRule r = EdgeRule::parse(rule);
            emit(G, io::verdict_to_json(edge_verdict(load_curve(fa), load_curve(fb), r), r));
        };
    });
    int budget = 200;
    auto* distclass = app.add_subcommand("distclass", "distance classes and a witnessed upper bound");
    pair_args(distclass);
    add_rule(distclass, rule);
    distclass->add_option("--budget", budget, "candidate budget for the upper bound (0 = skip)")->capture_default_str();
    distclass->callback([&] {
        action = [&] {
            NormalCurve a = load_curve(fa), b = load_curve(fb);
            EdgeRule r = EdgeRule::parse(rule);
            CgDistance cgd = cg_distance_class(a, b);
            json out{{"cg_class", cgd.value},
                     {"cg_class_meaning", cgd.value == 3 ? ">= 3" : std::to_string(cgd.value)},
                     {"cg_witness", cgd.witness ? io::curve_to_json(*cgd.witness) : json(nullptr)},
                     {"rule", r.name()},
                     {"pc_class", pc_distance_class(a, b, r)}};
            if (budget > 0) out["pc_upper_bound"] = io::pc_bound_to_json(pc_upper_bound(a, b, r, budget));
            emit(G, out);
        };
    });

    // train tracks
    auto* track = app.add_subcommand("track", "train tracks");
    track->require_subcommand(1);
    int penner = -1;
    auto* tbuild = track->add_subcommand("build", "one-switch track of a binding pair (or a Penner track)");
    pair_args(tbuild);
    tbuild->add_option("--penner", penner, "build the Penner track of this smoothing type (0 or 1) instead");
    tbuild->callback([&] {
        action = [&] {
            NormalCurve a = load_curve(fa), b = load_curve(fb);
            if (penner >= 0) {
                PennerTrack P = penner_track(embed_pair(a, b), penner);
                emit(G, json{{"track", io::track_to_json(P.track)},
                             {"weights_a", io::ints_to_json(P.weight_a)},
                             {"weights_b", io::ints_to_json(P.weight_b)},
                             {"maximal", is_maximal(P.track)},
                             {"efficient", is_efficient(P.track)}});
                return;
            }
            OneSwitchResult R = one_switch_track(a, b);
            json out = io::certificate_to_json(R.track, R.certificate);
            out = json{{"certificate", out},
                       {"witness", json{{"c_dart", R.witness.c_dart}, {"face", R.witness.face}, {"other_face", R.witness.other_face}}},
                       {"switches", R.track.num_switches()},
                       {"collapsed_bigons", R.collapsed_bigons},
                       {"certificate_valid", verify_certificate(R.track, R.certificate)},
                       {"recurrent", is_recurrent(R.track)},
                       {"maximal", is_maximal(R.track)}};
            emit(G, out);
        };
    });
    std::string fcert, ftrack;
    int max_stages = 100000;
    auto* tsplit = track->add_subcommand("split", "guided splitting sequence from a certificate");
    tsplit->add_option("certificate", fcert, "certificate file (from track build)")->required();
    tsplit->add_option("--max-stages", max_stages, "stage limit")->capture_default_str();
    tsplit->callback([&] {
        action = [&] {
            json j = io::read_json_file(fcert);
            if (j.is_object() && j.contains("certificate") && !j.contains("format")) j = j["certificate"];
            auto [t, cert] = io::certificate_from_json(j);
            if (!verify_certificate(t, cert)) fail("InvalidCertificate", "the certificate does not carry its curve");
            json stages = json::array();
            for (const SplitStage& s : splitting_sequence(t, cert, true, max_stages))
                stages.push_back(json{{"branches", s.track.num_branches()},
                                      {"maximal", s.maximal},
                                      {"vertex_cycle", io::curve_to_json(s.vertex_cycle)},
                                      {"guide_weights", io::ints_to_json(s.guide.weights)}});
            emit(G, json{{"stages", stages}, {"length", stages.size()}});
        };
    });
    auto load_track = [&] {
        json j = io::read_json_file(ftrack);
        if (j.is_object() && j.contains("format") && j["format"] == io::kCertificateFormat) return io::certificate_from_json(j).first;
        if (j.is_object() && j.contains("track") && !j.contains("format")) return io::track_from_json(j["track"]);
        if (j.is_object() && j.contains("certificate") && !j.contains("format"))
            return io::certificate_from_json(j["certificate"]).first;
        return io::track_from_json(j);
    };
    auto* tvc = track->add_subcommand("vc", "vertex cycles (extreme rays of the measure cone)");
    tvc->add_option("track", ftrack, "track or certificate file")->required();
    tvc->callback([&] {
        action = [&] {
            TrainTrack t = load_track();
            json rays = json::array(), curves = json::array();
            for (const Weights& w : extreme_rays(t)) {
                rays.push_back(io::ints_to_json(w));
                curves.push_back(io::curve_to_json(reconstruct(t, w)));
            }
            emit(G, json{{"rays", rays}, {"curves", curves}, {"chosen", io::ints_to_json(chosen_vertex_ray(t))}});
        };
    });
    auto* tmax = track->add_subcommand("maximal", "maximality and complementary regions");
    tmax->add_option("track", ftrack, "track or certificate file")->required();
    tmax->callback([&] {
        action = [&] {
            TrainTrack t = load_track();
            json regs = json::array();
            for (const TrackRegion& r : track_census(t))
                regs.push_back(json{{"id", r.id}, {"chi", r.chi}, {"punctures", r.punctures}, {"cusps", r.cusps}, {"cycles", r.cycles}});
            emit(G, json{{"maximal", is_maximal(t)},
                         {"efficient", is_efficient(t)},
                         {"recurrent", is_recurrent(t)},
                         {"violations", track_violations(t)},
                         {"regions", regs}});
        };
    });

    // mapping classes
    std::string fmc, fcurve;
    auto* applyc = app.add_subcommand("apply", "apply a mapping class to a curve");
    applyc->add_option("mapping_class", fmc, "mapping class file")->required();
    applyc->add_option("curve", fcurve, "curve file")->required();
    applyc->callback([&] { action = [&] { emit(G, io::curve_to_json(apply(load_mapping_class(fmc), load_curve(fcurve)))); }; });
    auto tv_json = [&](const PseudoAnosovSpec& tv) {
        return json{{"phi", io::mapping_class_to_json(tv.phi)},
                    {"trace_parameter", io::int_to_json(tv.trace_parameter)},
                    {"principal", tv.principal},
                    {"stratum", io::stratum_to_json(tv.stratum)},
                    {"dilatation", tv_dilatation(tv.trace_parameter)},
                    {"profile", io::profile_to_json(tv.profile)}};
    };
    auto* tvb = app.add_subcommand("tv-build", "Thurston-Veech map T_a o T_b^-1 of a binding pair");
    pair_args(tvb);
    tvb->callback([&] { action = [&] { emit(G, tv_json(thurston_veech(load_curve(fa), load_curve(fb)))); }; });
    int iters = 10;
    std::string fprobe;
    auto* dil = app.add_subcommand("dilatation", "growth of i(phi^k p, p) and its slope");
    dil->add_option("--phi", fmc, "mapping class file");
    dil->add_option("--tv", fa, "curve a: use the Thurston-Veech map of (a, b) given by --tv-b");
    dil->add_option("--tv-b", fb, "curve b for --tv");
    dil->add_option("--probe", fprobe, "probe curve (default: a for --tv)");
    dil->add_option("-n", iters, "iterations")->capture_default_str();
    dil->callback([&] {
        action = [&] {
            if (fmc.empty() == fa.empty()) throw UsageError("give exactly one of --phi and --tv");
            if (!fa.empty() && fb.empty()) throw UsageError("--tv needs --tv-b");
            json out;
            MappingClass phi;
            NormalCurve probe;
            if (!fa.empty()) {
                PseudoAnosovSpec tv = thurston_veech(load_curve(fa), load_curve(fb));
                phi = tv.phi;
                probe = fprobe.empty() ? tv.a : load_curve(fprobe);
                out["trace_parameter"] = io::int_to_json(tv.trace_parameter);
                out["principal"] = tv.principal;
                out["trace_oracle_log_dilatation"] = std::log(tv_dilatation(tv.trace_parameter));
            } else {
                if (fprobe.empty()) throw UsageError("--phi needs --probe");
                phi = load_mapping_class(fmc);
                probe = load_curve(fprobe);
            }
            out["growth"] = io::growth_to_json(dilatation_estimate(phi, probe, iters));
            emit(G, out);
        };
    });

    // explorer
    auto* explore = app.add_subcommand("explore", "finite windows into curve graphs");
    explore->require_subcommand(1);
    std::string fbase, fgraph, fsvg;
    std::vector<std::string> fgens;
    int radius = 1;
    long samples = 100000;
    auto* eball = explore->add_subcommand("ball", "orbit ball of a base curve under generators");
    eball->add_option("--base", fbase, "base curve")->required();
    eball->add_option("--gen", fgens, "generator mapping class files")->required();
    eball->add_option("--radius", radius, "word radius")->capture_default_str();
    add_rule(eball, rule);
    eball->callback([&] {
        action = [&] {
            std::vector<MappingClass> gens;
            for (const auto& f : fgens) gens.push_back(load_mapping_class(f));
            emit(G, io::graph_to_json(build_orbit_ball(load_curve(fbase), gens, radius, EdgeRule::parse(rule))));
        };
    });
    auto* edelta = explore->add_subcommand("delta", "four-point defect of a graph dump");
    edelta->add_option("graph", fgraph, "graph file")->required();
    edelta->add_option("--samples", samples, "4-tuples to sample (all when there are fewer)")->capture_default_str();
    edelta->callback([&] {
        action = [&] {
            OrbitGraph g = io::graph_from_json(io::read_json_file(fgraph));
            emit(G, io::delta_to_json(estimate_delta(g, samples, require_seed(G))));
        };
    });
    auto* ebottle = explore->add_subcommand("bottleneck", "midpoint deviations of geodesics");
    ebottle->add_option("graph", fgraph, "graph file")->required();
    ebottle->add_option("--pairs", samples, "vertex pairs to sample (all when there are fewer)")->capture_default_str();
    ebottle->add_option("--svg", fsvg, "write a histogram of deviations");
    ebottle->callback([&] {
        action = [&] {
            OrbitGraph g = io::graph_from_json(io::read_json_file(fgraph));
            BottleneckReport r = bottleneck_report(g, samples, require_seed(G));
            if (!fsvg.empty())
                io::write_text_file(fsvg, io::svg_histogram(r.histogram, "bottleneck deviations (" + g.rule.name() + ")",
                                                            "deviation from the midpoint"));
            emit(G, io::bottleneck_to_json(r));
        };
    });
    auto* eorbit = explore->add_subcommand("orbit", "orbit of a curve with witnessed distance bounds");
    eorbit->add_option("--phi", fmc, "mapping class file (with --base)");
    eorbit->add_option("--base", fbase, "base curve for --phi");
    eorbit->add_option("--tv", fa, "curve a of a Thurston-Veech pair");
    eorbit->add_option("--tv-b", fb, "curve b of a Thurston-Veech pair");
    eorbit->add_option("-n", iters, "orbit length")->capture_default_str();
    eorbit->add_option("--budget", budget, "candidate budget for upper bounds (0 = predicate only)")->capture_default_str();
    add_rule(eorbit, rule);
    eorbit->callback([&] {
        action = [&] {
            EdgeRule r = EdgeRule::parse(rule);
            if (fmc.empty() == fa.empty()) throw UsageError("give exactly one of --phi and --tv");
            if (!fa.empty()) {
                if (fb.empty()) throw UsageError("--tv needs --tv-b");
                PseudoAnosovSpec tv = thurston_veech(load_curve(fa), load_curve(fb));
                json out = io::orbit_growth_to_json(orbit_growth(tv, iters, r, budget));
                out["principal"] = tv.principal;
                emit(G, out);
            } else {
                if (fbase.empty()) throw UsageError("--phi needs --base");
                emit(G, io::orbit_growth_to_json(orbit_growth(load_mapping_class(fmc), load_curve(fbase), iters, r, budget)));
            }
        };
    });

    // random walks
    auto* walk = app.add_subcommand("walk", "random walks on the mapping class group");
    walk->require_subcommand(1);
    std::string fmeasure, fstats;
    int steps = 200, paths = 100;
    double epsilon = 1e-3;
    auto base_for = [&](const StepMeasure& mu) {
        if (!fbase.empty()) return load_curve(fbase);
        for (const MappingClass& f : mu.support)
            if (!f.is_identity()) return f.word.front().curve;
        return short_curves(mu.support.front().surface).at(0);
    };
    auto* wrun = walk->add_subcommand("run", "sample paths and write per-step statistics as CSV");
    wrun->add_option("--measure", fmeasure, "step measure file")->required();
    wrun->add_option("--steps", steps, "steps per path")->capture_default_str();
    wrun->add_option("--paths", paths, "number of paths")->capture_default_str();
    wrun->add_option("--base", fbase, "base curve c0 (default: first twist curve of the measure)");
    wrun->callback([&] {
        action = [&] {
            fs::path mp(fmeasure);
            StepMeasure mu = io::measure_from_json(io::read_json_file(mp), io::file_resolver(mp.parent_path()));
            emit_text(G, io::walk_to_csv(sample_paths(mu, steps, paths, require_seed(G), base_for(mu), G.jobs)));
        };
    });
    auto* wreport = walk->add_subcommand("report", "convergence diagnostics for a walk CSV");
    wreport->add_option("--stats", fstats, "CSV from walk run")->required();
    wreport->add_option("--epsilon", epsilon, "projective Cauchy tolerance")->capture_default_str();
    wreport->add_option("--svg", fsvg, "write the drift plot");
    wreport->add_option("--measure", fmeasure, "also report entropy and moments of this measure");
    wreport->add_option("--base", fbase, "base curve for the moments");
    wreport->callback([&] {
        action = [&] {
            WalkStats ws = io::walk_from_csv(io::read_text_file(fstats));
            // the bootstrap falls back to the walk's own seed
            ConvergenceReport r = convergence_report(ws, epsilon, given_seed(G).value_or(ws.seed));
            json out = io::convergence_to_json(r);
            if (!fmeasure.empty()) {
                fs::path mp(fmeasure);
                StepMeasure mu = io::measure_from_json(io::read_json_file(mp), io::file_resolver(mp.parent_path()));
                out["entropy"] = entropy(mu);
                out["log_moment"] = io::log_moment_to_json(log_moment(mu, base_for(mu)));
            }
            if (!fsvg.empty()) io::write_text_file(fsvg, io::svg_drift_plot(ws, r.median_drift));
            emit(G, out);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return kExitUsage;
    }
    if (*seed_flag) G.seed = seed_opt;
    try {
        if (action) action();
        return 0;
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << io::error_to_json(e.code(), e.what()).dump() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << io::error_to_json("InternalError", e.what()).dump() << "\n";
        return 1;
    }
}
