#include "seqbell/optics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace seqbell::optics {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double deg_per_rad = 180.0 / pi;

void require_unitary(const Eigen::Matrix4cd& u, const char* what) {
    const Eigen::Matrix4cd gram = u.adjoint() * u;
    const double dev =
        (gram - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff();
    if (dev > qcore::equivalence_tol) {
        throw std::invalid_argument(std::string(what) + ": not unitary");
    }
}

}  // namespace

OpticalElement OpticalElement::hwp(std::string label, double angle,
                                   unsigned path_mask) {
    if (path_mask == 0 || path_mask > 0b11) {
        throw std::invalid_argument("OpticalElement: bad path mask");
    }
    if (!std::isfinite(angle)) {
        throw std::invalid_argument("OpticalElement: non-finite angle");
    }
    OpticalElement e;
    e.kind = Kind::hwp;
    e.angle = angle;
    e.path_mask = path_mask;
    e.label = std::move(label);
    return e;
}

OpticalElement OpticalElement::bd(std::string label) {
    OpticalElement e;
    e.kind = Kind::bd;
    e.label = std::move(label);
    return e;
}

Eigen::Matrix2cd hwp_matrix(double angle) {
    const double c = std::cos(2.0 * angle);
    const double s = std::sin(2.0 * angle);
    Eigen::Matrix2cd j;
    j << c, s, s, -c;
    return j;
}

Eigen::Matrix4cd bd_matrix() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 2) = 1.0;  // path1 H -> path0 H
    m(2, 0) = 1.0;  // path0 H -> path1 H
    m(1, 1) = 1.0;  // V stays put
    m(3, 3) = 1.0;
    return m;
}

Eigen::Matrix4cd OpticalElement::mode_matrix() const {
    if (kind == Kind::bd) return bd_matrix();
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    const Eigen::Matrix2cd j = hwp_matrix(angle);
    for (int p = 0; p < 2; ++p) {
        if (path_mask & (1u << p)) m.block<2, 2>(2 * p, 2 * p) = j;
    }
    return m;
}

Eigen::Matrix4cd Circuit::transfer() const {
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
    for (const OpticalElement& e : elements) u = e.mode_matrix() * u;
    require_unitary(u, "Circuit::transfer");
    return u;
}

namespace {

// The shared interferometer core: split H/V onto separate paths, rotate
// each rail, and recombine. The path-0 plate carries the half-turn offset
// that sets the relative arm phase (see the header comment).
void append_core(std::vector<OpticalElement>& elems, double theta) {
    elems.push_back(OpticalElement::bd("BD1"));
    elems.push_back(OpticalElement::hwp("HWP2", 0.5 * theta, 0b10));
    elems.push_back(
        OpticalElement::hwp("HWP3", pi / 4.0 - 0.5 * theta + pi / 2.0, 0b01));
    elems.push_back(OpticalElement::bd("BD2"));
}

void require_theta_range(double theta) {
    if (!(theta >= 0.0 && theta <= pi / 2.0 + qcore::structural_tol)) {
        throw std::invalid_argument("circuit: theta outside [0, pi/2]");
    }
}

}  // namespace

Circuit build_two_port_circuit(double theta, double phi) {
    require_theta_range(theta);
    Circuit c;
    c.readout = Circuit::Readout::two_port;
    c.elements.push_back(OpticalElement::hwp("HWP1", 0.5 * phi, 0b01));
    append_core(c.elements, theta);
    c.elements.push_back(OpticalElement::hwp("HWP4", 0.5 * phi, 0b01));
    c.elements.push_back(
        OpticalElement::hwp("HWP5", 0.5 * phi + pi / 4.0, 0b10));
    return c;
}

Circuit build_single_port_circuit(double theta, double phi, int select) {
    require_theta_range(theta);
    if (select != 1 && select != -1) {
        throw std::invalid_argument("build_single_port_circuit: select must be +-1");
    }
    const double psi = select == 1 ? 0.5 * phi : 0.5 * phi + pi / 4.0;
    Circuit c;
    c.readout = Circuit::Readout::single_port;
    c.selected = select;
    c.elements.push_back(OpticalElement::hwp("HWP1", psi, 0b01));
    append_core(c.elements, theta);
    c.elements.push_back(OpticalElement::hwp("HWP4", psi, 0b01));
    return c;
}

std::vector<Eigen::Matrix2cd> compile_to_kraus(const Circuit& circuit) {
    const Eigen::Matrix4cd u = circuit.transfer();
    // Input on path 0: columns (0H, 0V); port p occupies rows (pH, pV).
    auto port = [&u](int p) {
        Eigen::Matrix2cd k;
        k << u(2 * p, 0), u(2 * p, 1), u(2 * p + 1, 0), u(2 * p + 1, 1);
        return k;
    };
    if (circuit.readout == Circuit::Readout::two_port) {
        return {port(0), port(1)};
    }
    return {port(0)};
}

double verify_equivalence(const std::vector<Eigen::Matrix2cd>& compiled,
                          const std::vector<Eigen::Matrix2cd>& reference) {
    if (compiled.size() != reference.size()) {
        throw std::invalid_argument(
            "verify_equivalence: operator count mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < compiled.size(); ++i) {
        const std::complex<double> ip =
            (reference[i].adjoint() * compiled[i]).trace();
        const std::complex<double> phase =
            std::abs(ip) > 1e-300 ? ip / std::abs(ip) : 1.0;
        const double dev =
            (compiled[i] - phase * reference[i]).cwiseAbs().maxCoeff();
        worst = std::max(worst, dev);
    }
    return worst;
}

std::string circuit_to_json(const Circuit& circuit) {
    nlohmann::json root;
    root["version"] = 1;
    root["readout"] = circuit.readout == Circuit::Readout::two_port
                          ? "two_port"
                          : "single_port";
    if (circuit.readout == Circuit::Readout::single_port) {
        root["selected"] = circuit.selected;
    }
    nlohmann::json elems = nlohmann::json::array();
    for (const OpticalElement& e : circuit.elements) {
        nlohmann::json j;
        j["label"] = e.label;
        if (e.kind == OpticalElement::Kind::hwp) {
            j["kind"] = "hwp";
            j["angle_deg"] = e.angle * deg_per_rad;
            j["path_mask"] = e.path_mask;
        } else {
            j["kind"] = "bd";
        }
        elems.push_back(std::move(j));
    }
    root["elements"] = std::move(elems);
    return root.dump(2);
}

Circuit circuit_from_json(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("circuit JSON: ") + e.what());
    }
    auto fail = [](const std::string& field) -> void {
        throw std::invalid_argument("circuit JSON: missing or invalid field '" +
                                    field + "'");
    };
    if (!root.contains("version") || !root["version"].is_number_integer() ||
        root["version"].get<int>() != 1) {
        fail("version");
    }
    if (!root.contains("readout") || !root["readout"].is_string()) {
        fail("readout");
    }
    Circuit c;
    const std::string readout = root["readout"].get<std::string>();
    if (readout == "two_port") {
        c.readout = Circuit::Readout::two_port;
    } else if (readout == "single_port") {
        c.readout = Circuit::Readout::single_port;
        if (!root.contains("selected") ||
            !root["selected"].is_number_integer()) {
            fail("selected");
        }
        c.selected = root["selected"].get<int>();
        if (c.selected != 1 && c.selected != -1) fail("selected");
    } else {
        fail("readout");
    }
    if (!root.contains("elements") || !root["elements"].is_array()) {
        fail("elements");
    }
    for (const nlohmann::json& j : root["elements"]) {
        if (!j.contains("kind") || !j["kind"].is_string()) fail("elements.kind");
        const std::string kind = j["kind"].get<std::string>();
        const std::string label =
            j.contains("label") && j["label"].is_string()
                ? j["label"].get<std::string>()
                : std::string();
        if (kind == "bd") {
            c.elements.push_back(OpticalElement::bd(label));
        } else if (kind == "hwp") {
            if (!j.contains("angle_deg") || !j["angle_deg"].is_number()) {
                fail("elements.angle_deg");
            }
            if (!j.contains("path_mask") ||
                !j["path_mask"].is_number_unsigned()) {
                fail("elements.path_mask");
            }
            c.elements.push_back(OpticalElement::hwp(
                label, j["angle_deg"].get<double>() / deg_per_rad,
                j["path_mask"].get<unsigned>()));
        } else {
            fail("elements.kind");
        }
    }
    return c;
}

}  // namespace seqbell::optics
