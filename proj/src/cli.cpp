#include "seqbell/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqbell/bell.hpp"
#include "seqbell/montecarlo.hpp"
#include "seqbell/optics.hpp"
#include "seqbell/weakmeas.hpp"

namespace seqbell::cli {

namespace {

constexpr double rad_per_deg = std::numbers::pi / 180.0;
constexpr double circuit_gate = 1e-9;  // verify-circuit pass threshold

std::string sig(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

std::string sig6(double v) { return sig(v, 6); }
std::string sig10(double v) { return sig(v, 10); }

void require_theta_deg(double theta_deg) {
    if (!(theta_deg >= 0.0 && theta_deg <= 90.0)) {
        throw std::invalid_argument("theta-deg must lie in [0, 90]");
    }
}

// Writes either to a file or to the console stream when path is "-".
class OutputTarget {
  public:
    OutputTarget(const std::string& path, std::ostream& console)
        : console_(console) {
        if (path != "-") {
            file_.open(path);
            if (!file_) {
                throw std::invalid_argument("cannot open output file '" +
                                            path + "'");
            }
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : console_; }

  private:
    std::ofstream file_;
    std::ostream& console_;
};

int cmd_svalues(double theta_deg, std::ostream& out) {
    require_theta_deg(theta_deg);
    const double theta = theta_deg * rad_per_deg;
    const bell::SValues s = bell::predicted_svalues(theta);
    const bool v1 = s.s_ab1 > 2.0;
    const bool v2 = s.s_ab2 > 2.0;
    out << "theta_deg: " << sig6(theta_deg) << "\n"
        << "F: " << sig6(std::sin(2.0 * theta)) << "\n"
        << "G: " << sig6(std::cos(2.0 * theta)) << "\n"
        << "S_AB1: " << sig6(s.s_ab1) << "\n"
        << "S_AB2: " << sig6(s.s_ab2) << "\n"
        << "violates_AB1: " << (v1 ? "true" : "false") << "\n"
        << "violates_AB2: " << (v2 ? "true" : "false") << "\n"
        << "double_violation: " << (v1 && v2 ? "true" : "false") << "\n";
    return 0;
}

int cmd_sweep(double from_deg, double to_deg, double step_deg,
              const std::string& out_path, std::ostream& console) {
    require_theta_deg(from_deg);
    require_theta_deg(to_deg);
    if (from_deg > to_deg) {
        throw std::invalid_argument("from-deg must not exceed to-deg");
    }
    if (!(step_deg > 0.0)) {
        throw std::invalid_argument("step-deg must be > 0");
    }
    std::vector<double> degs;
    for (long long i = 0;; ++i) {
        const double t = from_deg + double(i) * step_deg;
        if (t > to_deg + step_deg * 1e-9) break;
        degs.push_back(std::min(t, to_deg));
    }
    std::vector<double> thetas;
    thetas.reserve(degs.size());
    for (double d : degs) thetas.push_back(d * rad_per_deg);

    const std::vector<bell::SweepPoint> table =
        bell::sweep(thetas, bell::default_settings(), qcore::singlet());

    OutputTarget target(out_path, console);
    std::ostream& os = target.stream();
    os << "theta_deg,F,G,S_AB1_analytic,S_AB2_analytic,S_AB1_sim,S_AB2_sim\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
        const bell::SweepPoint& p = table[i];
        os << sig10(degs[i]) << ',' << sig10(p.f) << ',' << sig10(p.g) << ','
           << sig10(p.analytic.s_ab1) << ',' << sig10(p.analytic.s_ab2) << ','
           << sig10(p.simulated.s_ab1) << ',' << sig10(p.simulated.s_ab2)
           << '\n';
    }
    return 0;
}

montecarlo::ExperimentConfig parse_config(const std::string& path,
                                          std::vector<double>& thetas_deg) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file '" + path + "'");
    }
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (!root.is_object()) {
        throw std::invalid_argument("config: top level must be an object");
    }
    for (const auto& [key, value] : root.items()) {
        (void)value;
        if (key != "version" && key != "pair_rate" && key != "window" &&
            key != "vis_zx" && key != "vis_diag" && key != "seed" &&
            key != "thetas_deg") {
            throw std::invalid_argument("config field '" + key +
                                        "' is not recognized");
        }
    }
    auto require_number = [&root](const char* field) -> double {
        if (!root.contains(field) || !root[field].is_number()) {
            throw std::invalid_argument(std::string("config field '") + field +
                                        "' is missing or not a number");
        }
        return root[field].get<double>();
    };
    if (!root.contains("version") || !root["version"].is_number_integer() ||
        root["version"].get<int>() != 1) {
        throw std::invalid_argument(
            "config field 'version' is missing or not 1");
    }
    montecarlo::ExperimentConfig cfg;
    cfg.pair_rate = require_number("pair_rate");
    cfg.window = require_number("window");
    cfg.vis_zx = require_number("vis_zx");
    cfg.vis_diag = require_number("vis_diag");
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned()) {
            throw std::invalid_argument(
                "config field 'seed' is not a nonnegative integer");
        }
        cfg.seed = root["seed"].get<std::uint64_t>();
    }
    if (!root.contains("thetas_deg") || !root["thetas_deg"].is_array() ||
        root["thetas_deg"].empty()) {
        throw std::invalid_argument(
            "config field 'thetas_deg' is missing or not a nonempty array");
    }
    thetas_deg.clear();
    for (const nlohmann::json& v : root["thetas_deg"]) {
        if (!v.is_number()) {
            throw std::invalid_argument(
                "config field 'thetas_deg' has a non-numeric entry");
        }
        thetas_deg.push_back(v.get<double>());
        cfg.thetas.push_back(v.get<double>() * rad_per_deg);
    }
    montecarlo::validate_config(cfg);
    return cfg;
}

int cmd_simulate(const std::string& config_path,
                 std::optional<std::uint64_t> seed_override,
                 const std::string& out_path, std::ostream& console) {
    std::vector<double> thetas_deg;
    montecarlo::ExperimentConfig cfg = parse_config(config_path, thetas_deg);
    if (seed_override) cfg.seed = *seed_override;

    const std::vector<montecarlo::ExperimentPoint> points =
        montecarlo::run_experiment(cfg);

    OutputTarget target(out_path, console);
    std::ostream& os = target.stream();
    os << "theta_deg,S_AB1,S_AB1_sigma,S_AB2,S_AB2_sigma,"
          "sigmas_above_2_AB1,sigmas_above_2_AB2,seed\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const montecarlo::SEstimatePair& e = points[i].estimates;
        os << sig10(thetas_deg[i]) << ',' << sig10(e.ab1.s) << ','
           << sig10(e.ab1.sigma) << ',' << sig10(e.ab2.s) << ','
           << sig10(e.ab2.sigma) << ',' << sig10(e.ab1.sigmas_above_2) << ','
           << sig10(e.ab2.sigmas_above_2) << ',' << cfg.seed << '\n';
    }
    return 0;
}

void perturb_hwp3(optics::Circuit& c, double delta_rad) {
    for (optics::OpticalElement& e : c.elements) {
        if (e.label == "HWP3") e.angle += delta_rad;
    }
}

int cmd_verify_circuit(double theta_deg, double phi_deg,
                       const std::string& circuit_json_path,
                       const std::string& export_path, double perturb_deg,
                       std::ostream& out) {
    require_theta_deg(theta_deg);
    const double theta = theta_deg * rad_per_deg;
    const double phi = phi_deg * rad_per_deg;

    // Reference operators: measurement basis |phi> = cos(phi)|H> + sin(phi)|V>
    // corresponds to the Bloch axis (z, x) = (cos 2phi, sin 2phi).
    const weakmeas::KrausPair ref = weakmeas::kraus_pair(weakmeas::WeakMeasurement(
        theta, qcore::BlochDirection(std::cos(2.0 * phi), std::sin(2.0 * phi))));

    struct Row {
        std::string name;
        double deviation;
    };
    std::vector<Row> rows;

    auto reference_for = [&](const optics::Circuit& c) {
        std::vector<Eigen::Matrix2cd> refs;
        if (c.readout == optics::Circuit::Readout::two_port) {
            refs = {ref.m_plus, ref.m_minus};
        } else {
            refs = {c.selected == 1 ? ref.m_plus : ref.m_minus};
        }
        return refs;
    };

    if (!circuit_json_path.empty()) {
        std::ifstream in(circuit_json_path);
        if (!in) {
            throw std::invalid_argument("cannot open circuit file '" +
                                        circuit_json_path + "'");
        }
        std::stringstream ss;
        ss << in.rdbuf();
        optics::Circuit c = optics::circuit_from_json(ss.str());
        perturb_hwp3(c, perturb_deg * rad_per_deg);
        rows.push_back({"circuit:" + circuit_json_path,
                        optics::verify_equivalence(optics::compile_to_kraus(c),
                                                   reference_for(c))});
        out << "verifying against theta_deg=" << sig6(theta_deg)
            << " phi_deg=" << sig6(phi_deg) << "\n";
    } else {
        optics::Circuit a = optics::build_two_port_circuit(theta, phi);
        optics::Circuit bp = optics::build_single_port_circuit(theta, phi, +1);
        optics::Circuit bm = optics::build_single_port_circuit(theta, phi, -1);
        perturb_hwp3(a, perturb_deg * rad_per_deg);
        perturb_hwp3(bp, perturb_deg * rad_per_deg);
        perturb_hwp3(bm, perturb_deg * rad_per_deg);

        out << "elements (two-port circuit):\n";
        for (const optics::OpticalElement& e : a.elements) {
            if (e.kind == optics::OpticalElement::Kind::hwp) {
                out << "  " << e.label << "  hwp  angle_deg="
                    << sig6(e.angle / rad_per_deg) << "  paths=";
                if (e.path_mask & 1u) out << "0";
                if (e.path_mask & 2u) out << (e.path_mask & 1u ? ",1" : "1");
                out << "\n";
            } else {
                out << "  " << e.label << "  bd\n";
            }
        }
        rows.push_back({"two_port", optics::verify_equivalence(
                                        optics::compile_to_kraus(a),
                                        reference_for(a))});
        rows.push_back({"single_port(+1)",
                        optics::verify_equivalence(optics::compile_to_kraus(bp),
                                                   reference_for(bp))});
        rows.push_back({"single_port(-1)",
                        optics::verify_equivalence(optics::compile_to_kraus(bm),
                                                   reference_for(bm))});

        if (!export_path.empty()) {
            std::ofstream f(export_path);
            if (!f) {
                throw std::invalid_argument("cannot open output file '" +
                                            export_path + "'");
            }
            f << optics::circuit_to_json(a) << "\n";
        }
    }

    double worst = 0.0;
    for (const Row& r : rows) {
        out << r.name << " deviation: " << sig6(r.deviation) << "\n";
        worst = std::max(worst, r.deviation);
    }
    out << "max deviation: " << sig6(worst) << "\n";
    if (worst > circuit_gate) {
        out << "FAIL: deviation exceeds " << sig6(circuit_gate) << "\n";
        return 2;
    }
    out << "OK: all operators match within " << sig6(circuit_gate) << "\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Sequential weak-measurement Bell-test simulator"};
    app.name("seqbell");
    app.require_subcommand(0, 1);

    // svalues
    CLI::App* sv = app.add_subcommand(
        "svalues", "Closed-form F, G and CHSH values at one angle");
    double sv_theta_pos = std::nan("");
    double sv_theta_opt = std::nan("");
    CLI::Option* sv_pos =
        sv->add_option("theta_deg", sv_theta_pos, "strength angle in degrees");
    CLI::Option* sv_opt = sv->add_option("--theta-deg", sv_theta_opt,
                                         "strength angle in degrees");

    // sweep
    CLI::App* sw = app.add_subcommand(
        "sweep", "CSV table of S values over a range of angles");
    double sw_from = 0.0, sw_to = 45.0, sw_step = 0.5;
    std::string sw_out = "-";
    sw->add_option("--from-deg", sw_from, "start angle (default 0)");
    sw->add_option("--to-deg", sw_to, "end angle, inclusive (default 45)");
    sw->add_option("--step-deg", sw_step, "step (default 0.5)");
    sw->add_option("--out", sw_out, "output CSV path ('-' for stdout)");

    // simulate
    CLI::App* si = app.add_subcommand(
        "simulate", "Finite-statistics experiment from a JSON config");
    std::string si_config;
    std::string si_out = "-";
    std::uint64_t si_seed = 0;
    si->add_option("--config", si_config, "JSON config path")->required();
    si->add_option("--out", si_out, "output CSV path ('-' for stdout)");
    CLI::Option* si_seed_opt =
        si->add_option("--seed", si_seed, "override the config seed");

    // verify-circuit
    CLI::App* vc = app.add_subcommand(
        "verify-circuit",
        "Compile the optical circuits and compare to the Kraus operators");
    double vc_theta = 18.4, vc_phi = 0.0, vc_perturb = 0.0;
    std::string vc_circuit, vc_out;
    vc->add_option("--theta-deg", vc_theta, "strength angle (default 18.4)");
    vc->add_option("--phi-deg", vc_phi, "measurement basis angle (default 0)");
    vc->add_option("--circuit-json", vc_circuit,
                   "verify a serialized circuit instead of the built-in ones");
    vc->add_option("--out", vc_out, "write the two-port circuit JSON here");
    vc->add_option("--perturb-hwp3-deg", vc_perturb,
                   "debug: offset the HWP3 angle before verifying");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("seqbell");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*sv) {
            if (sv_pos->count() + sv_opt->count() != 1) {
                err << "error: svalues needs exactly one angle (positional "
                       "or --theta-deg)\n";
                return 1;
            }
            return cmd_svalues(sv_pos->count() ? sv_theta_pos : sv_theta_opt,
                               out);
        }
        if (*sw) return cmd_sweep(sw_from, sw_to, sw_step, sw_out, out);
        if (*si) {
            std::optional<std::uint64_t> seed;
            if (si_seed_opt->count()) seed = si_seed;
            return cmd_simulate(si_config, seed, si_out, out);
        }
        if (*vc) {
            return cmd_verify_circuit(vc_theta, vc_phi, vc_circuit, vc_out,
                                      vc_perturb, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    err << "error: a subcommand is required (see --help)\n";
    return 1;
}

}  // namespace seqbell::cli
