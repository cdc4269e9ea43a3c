#pragma once

#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cpsf/noise.hpp"
#include "cpsf/opa.hpp"
#include "cpsf/params.hpp"
#include "cpsf/response.hpp"

namespace cpsf {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One sweep: a frequency grid, a base parameter set, optional per-curve
// variants (each overrides a subset of the base fields) and a column
// selection. Variant columns get a _v<i> suffix.
struct SweepConfig {
    DimensionlessParams params;
    std::vector<DimensionlessParams> variants;  // empty means just `params`
    BathOccupations bath;
    double kappa_probe = 0.01;
    double omega_min = -2.0;
    double omega_max = 2.0;
    int n_points = 1001;
    std::vector<std::string> outputs = {"cpsf", "kappa_eff"};
    std::string format = "csv";

    void validate() const {
        if (!(omega_min < omega_max))
            throw ConfigError("config: omega_min must be < omega_max");
        if (n_points < 2) throw ConfigError("config: n_points must be >= 2");
        if (format != "csv" && format != "json")
            throw ConfigError("config: format must be csv or json");
        if (outputs.empty()) throw ConfigError("config: outputs must not be empty");
        for (const auto& o : outputs)
            if (o != "cpsf" && o != "kappa_eff" && o != "chi" && o != "t_eff" &&
                o != "reflectivity" && o != "keldysh")
                throw ConfigError("config: unknown output column '" + o + "'");
    }
};

struct OpaSweepConfig {
    std::vector<OpaParams> curves;
    double omega_min = -2.0;
    double omega_max = 2.0;
    int n_points = 1001;
    std::string format = "csv";

    void validate() const {
        if (curves.empty()) throw ConfigError("opa config: no parameter sets");
        if (!(omega_min < omega_max))
            throw ConfigError("config: omega_min must be < omega_max");
        if (n_points < 2) throw ConfigError("config: n_points must be >= 2");
        if (format != "csv" && format != "json")
            throw ConfigError("config: format must be csv or json");
    }
};

struct SpectrumTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, double> metadata;  // e.g. opa window endpoints
};

namespace detail {

inline void assign_param(DimensionlessParams& d, const std::string& key, double v) {
    if (key == "c0") d.c0 = v;
    else if (key == "c1") d.c1 = v;
    else if (key == "xi_m") d.xi_m = v;
    else if (key == "xi_d") d.xi_d = v;
    else if (key == "kappa_over_gamma_m") d.kappa_over_gamma_m = v;
    else if (key == "gamma_ratio") d.gamma_ratio = v;
    else throw ConfigError("config: unknown parameter field '" + key + "'");
}

inline DimensionlessParams params_from_json(const nlohmann::json& j) {
    DimensionlessParams d;
    if (j.contains("kappa") || j.contains("gamma_m")) {
        // dimensional entry point
        SystemParams p;
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            const double v = it.value().get<double>();
            if (k == "kappa") p.kappa = v;
            else if (k == "gamma_m") p.gamma_m = v;
            else if (k == "gamma_d") p.gamma_d = v;
            else if (k == "g") p.g = v;
            else if (k == "G") p.G = v;
            else if (k == "lambda_m") p.lambda_m = v;
            else if (k == "lambda_d") p.lambda_d = v;
            else if (k == "phi_m") p.phi_m = v;
            else if (k == "phi_d") p.phi_d = v;
            else throw ConfigError("config: unknown system parameter field '" + k + "'");
        }
        return to_dimensionless(p);
    }
    for (auto it = j.begin(); it != j.end(); ++it)
        assign_param(d, it.key(), it.value().get<double>());
    return d;
}

}  // namespace detail

inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
    SweepConfig c;
    try {
        if (j.contains("params")) c.params = detail::params_from_json(j.at("params"));
        if (j.contains("variants")) {
            for (const auto& v : j.at("variants")) {
                DimensionlessParams d = c.params;
                for (auto it = v.begin(); it != v.end(); ++it)
                    detail::assign_param(d, it.key(), it.value().get<double>());
                c.variants.push_back(d);
            }
        }
        if (j.contains("bath")) {
            const auto& b = j.at("bath");
            if (b.contains("n_c")) c.bath.n_c = b.at("n_c").get<double>();
            if (b.contains("n_m")) c.bath.n_m = b.at("n_m").get<double>();
            if (b.contains("n_d")) c.bath.n_d = b.at("n_d").get<double>();
        }
        if (j.contains("kappa_probe")) c.kappa_probe = j.at("kappa_probe").get<double>();
        if (j.contains("omega_min")) c.omega_min = j.at("omega_min").get<double>();
        if (j.contains("omega_max")) c.omega_max = j.at("omega_max").get<double>();
        if (j.contains("n_points")) c.n_points = j.at("n_points").get<int>();
        if (j.contains("outputs")) c.outputs = j.at("outputs").get<std::vector<std::string>>();
        if (j.contains("format")) c.format = j.at("format").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

inline OpaSweepConfig opa_config_from_json(const nlohmann::json& j) {
    OpaSweepConfig c;
    auto one = [](const nlohmann::json& v) {
        OpaParams o;
        o.kappa = 1.0;
        if (v.contains("xi_k")) o.lambda = v.at("xi_k").get<double>() * o.kappa / 2.0;
        if (v.contains("lambda")) o.lambda = v.at("lambda").get<double>();
        if (v.contains("delta_k")) o.delta_p = v.at("delta_k").get<double>() * o.kappa;
        if (v.contains("delta_p")) o.delta_p = v.at("delta_p").get<double>();
        return o;
    };
    try {
        if (j.contains("curves"))
            for (const auto& v : j.at("curves")) c.curves.push_back(one(v));
        else
            c.curves.push_back(one(j));
        if (j.contains("omega_min")) c.omega_min = j.at("omega_min").get<double>();
        if (j.contains("omega_max")) c.omega_max = j.at("omega_max").get<double>();
        if (j.contains("n_points")) c.n_points = j.at("n_points").get<int>();
        if (j.contains("format")) c.format = j.at("format").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

// Minimal flat-TOML reader: [section] headers, key = value lines with
// numbers, quoted strings, booleans and inline arrays of those. Enough for
// the parameter files; anything richer should use JSON.
inline nlohmann::json toml_subset_to_json(std::istream& in) {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* scope = &root;
    std::string line;
    int lineno = 0;
    auto parse_scalar = [&](std::string s) -> nlohmann::json {
        auto trim = [](std::string& t) {
            const auto b = t.find_first_not_of(" \t");
            const auto e = t.find_last_not_of(" \t");
            t = (b == std::string::npos) ? "" : t.substr(b, e - b + 1);
        };
        trim(s);
        if (s.empty()) throw ConfigError("toml: empty value at line " + std::to_string(lineno));
        if (s.front() == '"') {
            if (s.size() < 2 || s.back() != '"')
                throw ConfigError("toml: unterminated string at line " + std::to_string(lineno));
            return s.substr(1, s.size() - 2);
        }
        if (s == "true") return true;
        if (s == "false") return false;
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("toml: bad value '" + s + "' at line " + std::to_string(lineno));
        }
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("toml: bad section at line " + std::to_string(lineno));
            scope = &root[line.substr(1, line.size() - 2)];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("toml: expected key = value at line " + std::to_string(lineno));
        std::string key = line.substr(0, eq);
        key.erase(key.find_last_not_of(" \t") + 1);
        std::string val = line.substr(eq + 1);
        const auto vb = val.find_first_not_of(" \t");
        val = (vb == std::string::npos) ? "" : val.substr(vb);
        if (!val.empty() && val.front() == '[') {
            if (val.back() != ']')
                throw ConfigError("toml: unterminated array at line " + std::to_string(lineno));
            nlohmann::json arr = nlohmann::json::array();
            std::string body = val.substr(1, val.size() - 2);
            std::string item;
            std::istringstream bs(body);
            while (std::getline(bs, item, ','))
                if (item.find_first_not_of(" \t") != std::string::npos)
                    arr.push_back(parse_scalar(item));
            (*scope)[key] = arr;
        } else {
            (*scope)[key] = parse_scalar(val);
        }
    }
    return root;
}

inline nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".toml") == 0)
        return toml_subset_to_json(in);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

namespace detail {

inline void run_indexed(int n, int n_threads, const std::function<void(int)>& fn) {
    if (n_threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t)
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += n_threads) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

// Per-frequency evaluation of the requested columns. Rows are stored in
// frequency order regardless of which thread computed them, so output is
// deterministic for any thread count.
inline SpectrumTable build_spectrum(const SweepConfig& cfg, int n_threads = 1) {
    cfg.validate();
    std::vector<DimensionlessParams> sets =
        cfg.variants.empty() ? std::vector<DimensionlessParams>{cfg.params} : cfg.variants;
    const bool suffixed = !cfg.variants.empty();

    std::vector<SystemParams> sys;
    for (const auto& d : sets) sys.push_back(from_dimensionless(d));

    SpectrumTable t;
    t.columns.push_back("omega");
    auto col = [&](const std::string& base, std::size_t vi) {
        t.columns.push_back(suffixed ? base + "_v" + std::to_string(vi) : base);
    };
    for (std::size_t vi = 0; vi < sets.size(); ++vi) {
        for (const auto& out : cfg.outputs) {
            if (out == "cpsf") col("cpsf", vi);
            else if (out == "kappa_eff") col("kappa_eff", vi);
            else if (out == "chi") {
                for (const char* n : {"chi_aa", "chi_aad", "chi_ab", "chi_abd", "chi_ad", "chi_add"}) {
                    col(std::string("re_") + n, vi);
                    col(std::string("im_") + n, vi);
                }
            } else if (out == "t_eff") col("t_eff", vi);
            else if (out == "reflectivity") col("reflectivity", vi);
            else if (out == "keldysh") col("minus_i_gk", vi);
            else throw ConfigError("config: unknown output column '" + out + "'");
        }
    }

    t.rows.assign(cfg.n_points, {});
    const double dw = (cfg.omega_max - cfg.omega_min) / double(cfg.n_points - 1);
    detail::run_indexed(cfg.n_points, n_threads, [&](int i) {
        const double w = cfg.omega_min + dw * i;
        std::vector<double>& row = t.rows[i];
        row.reserve(t.columns.size());
        row.push_back(w);
        for (std::size_t vi = 0; vi < sets.size(); ++vi) {
            const SystemParams& p = sys[vi];
            for (const auto& out : cfg.outputs) {
                if (out == "cpsf") {
                    row.push_back(p.kappa * greens(p, w).cpsf);
                } else if (out == "kappa_eff") {
                    row.push_back(greens(p, w).kappa_eff / p.kappa);
                } else if (out == "chi") {
                    const ChiElements e = chi_elements(p, w);
                    for (const cx* z : {&e.aa, &e.aad, &e.ab, &e.abd, &e.ad, &e.add}) {
                        row.push_back(z->real());
                        row.push_back(z->imag());
                    }
                } else if (out == "t_eff") {
                    row.push_back(keldysh_and_teff(p, cfg.bath, w).t_eff);
                } else if (out == "reflectivity") {
                    row.push_back(
                        scattering_and_reflectivity(p, cfg.kappa_probe * p.kappa, w).reflectivity);
                } else if (out == "keldysh") {
                    row.push_back((cx(0.0, -1.0) * keldysh_and_teff(p, cfg.bath, w).g_keldysh).real());
                }
            }
        }
    });
    return t;
}

inline SpectrumTable build_opa_spectrum(const OpaSweepConfig& cfg, int n_threads = 1) {
    cfg.validate();
    SpectrumTable t;
    const bool suffixed = cfg.curves.size() > 1;
    t.columns.push_back("omega");
    for (std::size_t vi = 0; vi < cfg.curves.size(); ++vi) {
        const std::string sfx = suffixed ? "_v" + std::to_string(vi) : "";
        t.columns.push_back("opa_cpsf" + sfx);
        t.columns.push_back("opa_f" + sfx);
        const OpaWindow w = opa_negativity_window(cfg.curves[vi]);
        if (w.exists) {
            t.metadata["window_lo" + sfx] = w.lo;
            t.metadata["window_hi" + sfx] = w.hi;
        }
    }
    t.rows.assign(cfg.n_points, {});
    const double dw = (cfg.omega_max - cfg.omega_min) / double(cfg.n_points - 1);
    detail::run_indexed(cfg.n_points, n_threads, [&](int i) {
        const double w = cfg.omega_min + dw * i;
        std::vector<double>& row = t.rows[i];
        row.push_back(w);
        for (const OpaParams& o : cfg.curves) {
            const OpaCpsfSample s = opa_cpsf(o, w);
            row.push_back(o.kappa * s.a);
            row.push_back(s.f);
        }
    });
    return t;
}

// 17 significant digits, scientific: lossless double round-trip.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

inline void write_csv(const SpectrumTable& t, std::ostream& os) {
    for (const auto& [k, v] : t.metadata) os << "# " << k << " = " << format_number(v) << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_number(row[i]);
        os << "\n";
    }
}

inline void write_json(const SpectrumTable& t, std::ostream& os) {
    nlohmann::json j;
    j["columns"] = t.columns;
    if (!t.metadata.empty()) j["metadata"] = t.metadata;
    auto& rows = j["rows"] = nlohmann::json::array();
    for (const auto& row : t.rows) rows.push_back(row);
    os << j.dump(2) << "\n";
}

inline void write_table(const SpectrumTable& t, const std::string& format, std::ostream& os) {
    if (format == "json")
        write_json(t, os);
    else
        write_csv(t, os);
}

}  // namespace cpsf
