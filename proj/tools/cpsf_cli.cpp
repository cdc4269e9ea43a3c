#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpsf/cpsf.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

struct CommonOpts {
    std::string config_path;
    std::string output_path;
    std::string format;
    int threads = 1;
    std::optional<double> omega_min, omega_max;
    std::optional<int> n_points;
    std::optional<double> c0, c1, xi_m, xi_d, kappa_over_gamma_m, gamma_ratio;
    std::optional<double> n_c, n_m, n_d, kappa_probe;
};

void add_common(CLI::App* app, CommonOpts& o) {
    app->add_option("--config", o.config_path, "parameter file (.json or flat .toml)");
    app->add_option("--output", o.output_path, "output path (default stdout)");
    app->add_option("--format", o.format, "csv|json (wins over file value)");
    app->add_option("--threads", o.threads, "worker threads for sweeps");
    app->add_option("--omega-min", o.omega_min);
    app->add_option("--omega-max", o.omega_max);
    app->add_option("--points", o.n_points);
    app->add_option("--c0", o.c0);
    app->add_option("--c1", o.c1);
    app->add_option("--xi-m", o.xi_m);
    app->add_option("--xi-d", o.xi_d);
    app->add_option("--kappa-over-gamma-m", o.kappa_over_gamma_m);
    app->add_option("--gamma-ratio", o.gamma_ratio);
    app->add_option("--n-c", o.n_c);
    app->add_option("--n-m", o.n_m);
    app->add_option("--n-d", o.n_d);
    app->add_option("--kappa-probe", o.kappa_probe, "probe coupling in units of kappa");
}

nlohmann::json load_or_empty(const CommonOpts& o) {
    if (o.config_path.empty()) return nlohmann::json::object();
    return cpsf::load_config_file(o.config_path);
}

// flags win over file values
void apply_overrides(cpsf::SweepConfig& cfg, const CommonOpts& o) {
    auto set_param = [&](cpsf::DimensionlessParams& d) {
        if (o.c0) d.c0 = *o.c0;
        if (o.c1) d.c1 = *o.c1;
        if (o.xi_m) d.xi_m = *o.xi_m;
        if (o.xi_d) d.xi_d = *o.xi_d;
        if (o.kappa_over_gamma_m) d.kappa_over_gamma_m = *o.kappa_over_gamma_m;
        if (o.gamma_ratio) d.gamma_ratio = *o.gamma_ratio;
    };
    set_param(cfg.params);
    for (auto& v : cfg.variants) set_param(v);
    if (o.n_c) cfg.bath.n_c = *o.n_c;
    if (o.n_m) cfg.bath.n_m = *o.n_m;
    if (o.n_d) cfg.bath.n_d = *o.n_d;
    if (o.kappa_probe) cfg.kappa_probe = *o.kappa_probe;
    if (o.omega_min) cfg.omega_min = *o.omega_min;
    if (o.omega_max) cfg.omega_max = *o.omega_max;
    if (o.n_points) cfg.n_points = *o.n_points;
    if (!o.format.empty()) cfg.format = o.format;
    cfg.validate();
}

int emit(const cpsf::SpectrumTable& table, const std::string& format,
         const std::string& output_path) {
    if (output_path.empty()) {
        cpsf::write_table(table, format, std::cout);
        return 0;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file '" << output_path << "'\n";
        return kExitConfig;
    }
    cpsf::write_table(table, format, out);
    return 0;
}

int emit_json(const nlohmann::json& j, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file '" << output_path << "'\n";
        return kExitConfig;
    }
    out << j.dump(2) << "\n";
    return 0;
}

nlohmann::json report_json(const cpsf::StabilityReport& r) {
    return {{"c_m", r.c_m},
            {"c_d", r.c_d},
            {"xi_m_max", r.xi_m_max},
            {"xi_d_max", r.xi_d_max},
            {"stable_closed_form", r.stable_closed_form},
            {"stable_eigen", r.stable_eigen},
            {"margin", r.margin}};
}

nlohmann::json check_json(const cpsf::NegativityCheck& c) {
    return {{"kappa_a0", c.m}, {"negative", c.negative}, {"stable", c.stable}};
}

int cmd_spectrum(const CommonOpts& o, bool noise_defaults) {
    cpsf::SweepConfig cfg = cpsf::sweep_config_from_json(load_or_empty(o));
    if (noise_defaults && !load_or_empty(o).contains("outputs"))
        cfg.outputs = {"cpsf", "t_eff", "reflectivity", "keldysh"};
    apply_overrides(cfg, o);
    for (const auto& d : cfg.variants.empty() ? std::vector{cfg.params} : cfg.variants) {
        if (!cpsf::eigen_stability(cpsf::from_dimensionless(d)).stable) {
            std::cerr << "error: parameter set is unstable\n";
            return kExitInfeasible;
        }
    }
    return emit(cpsf::build_spectrum(cfg, o.threads), cfg.format, o.output_path);
}

int cmd_opa(const CommonOpts& o) {
    cpsf::OpaSweepConfig cfg = cpsf::opa_config_from_json(load_or_empty(o));
    if (o.omega_min) cfg.omega_min = *o.omega_min;
    if (o.omega_max) cfg.omega_max = *o.omega_max;
    if (o.n_points) cfg.n_points = *o.n_points;
    if (!o.format.empty()) cfg.format = o.format;
    cfg.validate();
    for (const auto& c : cfg.curves) {
        // boundary sets (lambda^2 = kappa^2/4 + delta_p^2) are allowed: the
        // spectral function stays finite there except for a genuine pole at
        // omega = 0 when detuned, which the sweep reports as an error
        const double excess = c.lambda * c.lambda -
                              (c.kappa * c.kappa / 4.0 + c.delta_p * c.delta_p);
        if (excess > 1e-12 * c.kappa * c.kappa) {
            std::cerr << "error: OPA parameter set is unstable\n";
            return kExitInfeasible;
        }
    }
    return emit(cpsf::build_opa_spectrum(cfg, o.threads), cfg.format, o.output_path);
}

int cmd_stability(const CommonOpts& o) {
    cpsf::SweepConfig cfg = cpsf::sweep_config_from_json(load_or_empty(o));
    apply_overrides(cfg, o);
    return emit_json(report_json(cpsf::stability_report(cfg.params)), o.output_path);
}

int cmd_optimize(const CommonOpts& o, std::optional<double> target_flag,
                 std::optional<double> ref_xi_m, std::optional<double> ref_xi_d) {
    const nlohmann::json j = load_or_empty(o);
    cpsf::SweepConfig cfg = cpsf::sweep_config_from_json(j);
    apply_overrides(cfg, o);

    std::optional<double> target = target_flag;
    if (!target && j.contains("target_m")) target = j.at("target_m").get<double>();
    if (!target) {
        std::cerr << "error: --target-m (or target_m in the config) is required\n";
        return kExitConfig;
    }
    if (!(*target < 0.0)) {
        std::cerr << "error: target M must be negative\n";
        return kExitConfig;
    }
    if (!ref_xi_m && j.contains("reference")) {
        ref_xi_m = j.at("reference").value("xi_m", 0.0);
        ref_xi_d = j.at("reference").value("xi_d", 0.0);
    }

    const cpsf::NegativityResult r = cpsf::optimize_paramps(cfg.params, *target);
    nlohmann::json out = {{"target_m", r.target_m},
                          {"xi_m_opt", r.xi_m_opt},
                          {"xi_d_opt", r.xi_d_opt},
                          {"achieved_m", r.achieved_m},
                          {"feasible", r.feasible},
                          {"m_max_estimate", r.m_max_estimate}};
    if (r.feasible) {
        cpsf::DimensionlessParams d = cfg.params;
        d.xi_m = r.xi_m_opt;
        d.xi_d = r.xi_d_opt;
        out["verification"] = check_json(cpsf::negativity_check(d));
    }
    if (ref_xi_m) {
        cpsf::DimensionlessParams d = cfg.params;
        d.xi_m = *ref_xi_m;
        d.xi_d = ref_xi_d.value_or(0.0);
        out["reference_verification"] = check_json(cpsf::negativity_check(d));
    }
    const int rc = emit_json(out, o.output_path);
    if (rc != 0) return rc;
    return r.feasible ? 0 : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"linear response of a parametrically modulated optomechanical cavity"};
    app.require_subcommand(1);

    CommonOpts spectrum_opts, opa_opts, stability_opts, noise_opts, optimize_opts;
    std::optional<double> target_m, ref_xi_m, ref_xi_d;

    CLI::App* spectrum = app.add_subcommand("spectrum", "frequency sweep of CPSF and friends");
    add_common(spectrum, spectrum_opts);
    CLI::App* optimize = app.add_subcommand("optimize", "solve for paramps hitting a target negativity");
    add_common(optimize, optimize_opts);
    optimize->add_option("--target-m", target_m, "target kappa A(0) < 0");
    optimize->add_option("--ref-xi-m", ref_xi_m, "reference point to verify");
    optimize->add_option("--ref-xi-d", ref_xi_d);
    CLI::App* opa = app.add_subcommand("opa", "detuned-OPA reference spectrum");
    add_common(opa, opa_opts);
    CLI::App* stability = app.add_subcommand("stability", "closed-form and eigenvalue stability report");
    add_common(stability, stability_opts);
    CLI::App* noise = app.add_subcommand("noise", "Keldysh spectrum, T_eff and reflectivity sweep");
    add_common(noise, noise_opts);

    try {
        app.parse(argc, argv);
        if (spectrum->parsed()) return cmd_spectrum(spectrum_opts, false);
        if (optimize->parsed()) return cmd_optimize(optimize_opts, target_m, ref_xi_m, ref_xi_d);
        if (opa->parsed()) return cmd_opa(opa_opts);
        if (stability->parsed()) return cmd_stability(stability_opts);
        if (noise->parsed()) return cmd_spectrum(noise_opts, true);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    } catch (const cpsf::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    }
    return 0;
}
