#include "nonholo/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "nonholo/compat.hpp"
#include "nonholo/spectral.hpp"

namespace nonholo {
namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string timestamp_iso() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericError("cannot write '" + path.string() + "'");
    out << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

std::string trajectory_csv(const Trajectory& traj, std::size_t dim) {
    std::ostringstream out;
    out << "t";
    for (std::size_t i = 1; i <= dim; ++i) out << ",q" << i;
    for (std::size_t i = 1; i <= dim; ++i) out << ",qd" << i;
    out << ",multiplier,energy,drift\n";
    for (const TrajectorySample& s : traj.samples) {
        out << fmt17(s.t);
        for (double v : s.q) out << ',' << fmt17(v);
        for (double v : s.qdot) out << ',' << fmt17(v);
        out << ',' << fmt17(s.multiplier) << ',' << fmt17(s.energy) << ',' << fmt17(s.drift)
            << '\n';
    }
    return out.str();
}

json trajectory_stats(const Trajectory& traj, const std::string& file) {
    double max_energy_drift = 0.0;
    double max_constraint_drift = 0.0;
    const double e0 = traj.samples.empty() ? 0.0 : traj.samples.front().energy;
    for (const TrajectorySample& s : traj.samples) {
        max_energy_drift = std::max(max_energy_drift, std::abs(s.energy - e0));
        max_constraint_drift = std::max(max_constraint_drift, std::abs(s.drift));
    }
    json j;
    j["file"] = file;
    j["samples"] = traj.samples.size();
    j["max_energy_drift"] = max_energy_drift;
    j["max_constraint_drift"] = max_constraint_drift;
    j["aborted"] = traj.aborted;
    if (traj.aborted) j["abort_reason"] = traj.abort_reason;
    return j;
}

json counts_json(const ConsistencyCounts& c) {
    return {{"velocity", c.velocity_conditions},
            {"orthogonality", c.orthogonality_conditions},
            {"total", c.total}};
}

} // namespace

std::string timestamp_compact() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
    return buf;
}

RunOutcome run_scenario(Scenario scenario, const std::filesystem::path& out_dir,
                        const StageSet& stages) {
    std::filesystem::create_directories(out_dir);

    RunOutcome out;
    out.dir = out_dir;
    json& manifest = out.manifest;
    manifest["artifact_version"] = kArtifactVersion;
    manifest["created_utc"] = timestamp_iso();
    manifest["seed"] = scenario.run.seed;

    std::vector<std::string> commands;
    if (stages.classify) commands.push_back("classify");
    if (stages.spectrum) commands.push_back("spectrum");
    if (stages.compat) commands.push_back("compat");
    if (stages.simulate || stages.compare) commands.push_back("simulate");
    if (stages.compare) commands.push_back("compare");
    manifest["commands"] = commands;

    bool projected = false;
    try {
        projected = scenario.validate_and_project();
    } catch (const std::exception& e) {
        manifest["scenario"] = scenario.to_json();
        manifest["error"] = e.what();
        manifest["outputs"] = json::array({"manifest.json"});
        write_json(out_dir / "manifest.json", manifest);
        throw;
    }
    manifest["velocity_projected"] = projected;
    manifest["scenario"] = scenario.to_json();

    const ConstraintForm a = scenario.constraint();
    const MetricField g = scenario.metric();
    const NaturalLagrangian sys = scenario.lagrangian();
    const RunParams& run = scenario.run;

    json& verdict = out.verdict;
    verdict["scenario"] = scenario.name;
    json summary;

    if (stages.classify) {
        const ClassificationResult res =
            classify(a, g, scenario.chart, run.tol_classify, run.n_samples, run.n_random,
                     run.seed);
        json c;
        c["class"] = to_string(res.constraint_class);
        c["max_closedness_residual"] = res.report.max_closedness_residual;
        c["max_frobenius_residual"] = res.report.max_frobenius_residual;
        c["max_closedness_normalized"] = res.report.max_closedness_normalized;
        c["max_frobenius_normalized"] = res.report.max_frobenius_normalized;
        c["n_conditions"] = res.report.n_conditions;
        c["n_samples_used"] = res.report.n_samples_used;
        c["n_samples_skipped"] = res.report.n_samples_skipped;
        c["tol"] = res.tol;
        if (scenario.expected_class) c["expected_class"] = to_string(*scenario.expected_class);
        verdict["classification"] = c;
        summary["classification"] = to_string(res.constraint_class);
    }

    const bool need_spectrum = stages.spectrum || stages.compat;
    SkewSpectrum spectrum;
    Mat m_q0, g_q0;
    if (need_spectrum) {
        m_q0 = curl(a, scenario.q0);
        g_q0 = g.at(scenario.q0);
        spectrum = build_b_basis(skew_spectrum(m_q0, g_q0, run.tol_rank), m_q0, g_q0);
    }

    if (stages.spectrum) {
        const BasisResiduals res = verify_basis(spectrum, m_q0, g_q0);
        json sp;
        sp["eigenvalues"] = spectrum.eigenvalues;
        sp["kappas"] = spectrum.kappas;
        sp["rank_2p"] = spectrum.rank;
        sp["kernel_dim"] = spectrum.kernel_dim();
        sp["residuals"] = {{"ortho", res.ortho},
                           {"meq_odd", res.meq_odd},
                           {"meq_even", res.meq_even},
                           {"eigen", res.eigen}};
        if (scenario.dim == 3)
            sp["three_dim_obstruction"] = three_dim_obstruction(a.at(scenario.q0), m_q0);
        verdict["spectrum"] = sp;
        summary["rank_2p"] = spectrum.rank;
    }

    if (stages.compat) {
        const CompatVerdict v = initial_data_verdict(a.at(scenario.q0), m_q0, g_q0, spectrum,
                                                     scenario.q0, scenario.qdot0, run.tol_compat);
        json c;
        c["case"] = to_string(v.verdict_case);
        c["compatible_at_point"] = v.compatible_at_point;
        c["constraint_residual"] = v.constraint_residual;
        c["compat_residual"] = v.compat_residual;
        c["ortho_residual"] = v.ortho_residual;
        c["representation_residual"] = v.representation_residual;
        c["condam_residual"] = v.condam_residual;
        c["kernel_coefficients"] = v.kernel_coefficients;
        c["admissible_kernel_dims"] = v.family.admissible_kernel_dims;
        c["kernel_dim"] = v.family.kernel_dim;
        c["consistency"] = counts_json(v.counts);
        c["necessary_conditions_only"] = v.necessary_conditions_only;
        verdict["compat"] = c;
        summary["case"] = to_string(v.verdict_case);
        summary["compatible_at_point"] = v.compatible_at_point;
    }

    std::vector<std::string> outputs = {"manifest.json", "verdict.json"};

    if (stages.simulate || stages.compare) {
        IntegrateOptions opts;
        opts.duration = run.duration;
        opts.step = run.step;
        opts.mu0 = run.mu0;
        opts.project_velocity = run.project_velocity;

        const Trajectory dal =
            integrate(sys, a, SystemKind::Dalembert, scenario.q0, scenario.qdot0, opts);
        const Trajectory vak =
            integrate(sys, a, SystemKind::Vakonomic, scenario.q0, scenario.qdot0, opts);

        write_text(out_dir / "dalembert.csv", trajectory_csv(dal, scenario.dim));
        write_text(out_dir / "vakonomic.csv", trajectory_csv(vak, scenario.dim));
        outputs.push_back("dalembert.csv");
        outputs.push_back("vakonomic.csv");

        json sim;
        sim["dalembert"] = trajectory_stats(dal, "dalembert.csv");
        sim["vakonomic"] = trajectory_stats(vak, "vakonomic.csv");
        verdict["simulate"] = sim;
        const bool aborted = dal.aborted || vak.aborted;
        if (aborted) summary["aborted"] = true;

        if (stages.compare && !aborted) {
            const TrajectoryComparison cmp = compare(dal, vak, g, run.compare_threshold);
            json cj;
            cj["sup_distance"] = cmp.sup_distance;
            cj["threshold"] = run.compare_threshold;
            if (cmp.first_crossing)
                cj["first_crossing"] = *cmp.first_crossing;
            else
                cj["first_crossing"] = nullptr;
            verdict["compare"] = cj;
            summary["sup_distance"] = cmp.sup_distance;
        }

        if (aborted) {
            // Persist the partial trajectories and diagnostics, then surface
            // the degeneracy as a numeric error.
            manifest["outputs"] = outputs;
            manifest["summary"] = summary;
            const std::string reason = dal.aborted ? dal.abort_reason : vak.abort_reason;
            manifest["error"] = reason;
            write_json(out_dir / "verdict.json", verdict);
            write_json(out_dir / "manifest.json", manifest);
            throw NumericError("integration aborted: " + reason);
        }
    }

    manifest["outputs"] = outputs;
    manifest["summary"] = summary;
    write_json(out_dir / "verdict.json", verdict);
    write_json(out_dir / "manifest.json", manifest);
    return out;
}

std::string report(const std::filesystem::path& run_dir) {
    const auto manifest_path = run_dir / "manifest.json";
    std::ifstream in(manifest_path);
    if (!in) throw ConfigError("no manifest.json in '" + run_dir.string() + "'");
    json manifest;
    try {
        in >> manifest;
    } catch (const json::exception& e) {
        throw ConfigError("corrupt manifest in '" + run_dir.string() + "': " + e.what());
    }

    std::ostringstream out;
    const json scenario = manifest.value("scenario", json::object());
    out << "run: " << scenario.value("name", std::string("?")) << " (N = "
        << scenario.value("dim", 0) << ")\n";
    if (manifest.contains("error")) {
        out << "error: " << manifest["error"].get<std::string>() << "\n";
        return out.str();
    }
    if (manifest.value("velocity_projected", false))
        out << "note: initial velocity was projected onto the constraint plane\n";

    json verdict;
    {
        std::ifstream vin(run_dir / "verdict.json");
        if (!vin) throw ConfigError("no verdict.json in '" + run_dir.string() + "'");
        try {
            vin >> verdict;
        } catch (const json::exception& e) {
            throw ConfigError("corrupt verdict in '" + run_dir.string() + "': " + e.what());
        }
    }

    if (verdict.contains("classification")) {
        const json& c = verdict["classification"];
        out << "class: " << c["class"].get<std::string>() << "\n";
        out << "  closedness residual: " << fmt6(c["max_closedness_residual"].get<double>())
            << "  frobenius residual: " << fmt6(c["max_frobenius_residual"].get<double>())
            << "\n";
        out << "  integrability conditions: " << c["n_conditions"].get<std::size_t>()
            << "  samples used/skipped: " << c["n_samples_used"].get<std::size_t>() << "/"
            << c["n_samples_skipped"].get<std::size_t>() << "\n";
    }

    if (verdict.contains("spectrum")) {
        const json& sp = verdict["spectrum"];
        out << "spectrum at q0: kappa = [";
        bool first = true;
        for (const auto& k : sp["kappas"]) {
            if (!first) out << ", ";
            out << fmt6(k.get<double>());
            first = false;
        }
        out << "], rank 2p = " << sp["rank_2p"].get<std::size_t>()
            << ", kernel dim = " << sp["kernel_dim"].get<std::size_t>() << "\n";
        const json& r = sp["residuals"];
        out << "  basis residuals: ortho " << fmt6(r["ortho"].get<double>()) << ", M-odd "
            << fmt6(r["meq_odd"].get<double>()) << ", M-even " << fmt6(r["meq_even"].get<double>())
            << ", eigen " << fmt6(r["eigen"].get<double>()) << "\n";
        if (sp.contains("three_dim_obstruction"))
            out << "  three-dim obstruction: " << fmt6(sp["three_dim_obstruction"].get<double>())
                << "\n";
    }

    if (verdict.contains("compat")) {
        const json& c = verdict["compat"];
        out << "verdict: " << c["case"].get<std::string>() << ", compatible_at_point = "
            << (c["compatible_at_point"].get<bool>() ? "true" : "false") << "\n";
        out << "  constraint residual: " << fmt6(c["constraint_residual"].get<double>())
            << "  compat residual: " << fmt6(c["compat_residual"].get<double>()) << "\n";
        const json& cc = c["consistency"];
        out << "  consistency conditions: " << cc["velocity"].get<std::size_t>() << " + "
            << cc["orthogonality"].get<std::size_t>() << " (velocity + orthogonality), total "
            << cc["total"].get<std::size_t>() << "\n";
    }

    if (verdict.contains("simulate")) {
        const json& sim = verdict["simulate"];
        for (const char* key : {"dalembert", "vakonomic"}) {
            const json& t = sim[key];
            out << key << ": " << t["file"].get<std::string>() << ", samples "
                << t["samples"].get<std::size_t>() << ", max |E-E0| "
                << fmt6(t["max_energy_drift"].get<double>()) << ", max |a.qdot| "
                << fmt6(t["max_constraint_drift"].get<double>());
            if (t.value("aborted", false)) out << "  [aborted: " << t.value("abort_reason", std::string()) << "]";
            out << "\n";
        }
    }

    if (verdict.contains("compare")) {
        const json& c = verdict["compare"];
        out << "divergence: sup distance = " << fmt6(c["sup_distance"].get<double>());
        if (!c["first_crossing"].is_null())
            out << ", first crossing of " << fmt6(c["threshold"].get<double>()) << " at t = "
                << fmt6(c["first_crossing"].get<double>());
        else
            out << ", never exceeds " << fmt6(c["threshold"].get<double>());
        out << "\n";
    }
    return out.str();
}

} // namespace nonholo
