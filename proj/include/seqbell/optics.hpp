#pragma once

// Jones-calculus model of the two-path polarization interferometers that
// realize the tunable-strength measurement optically. The mode space is
// path (x) polarization with basis order
//   (path0 H, path0 V, path1 H, path1 V);
// light enters on path 0.
//
// Elements:
//   - Half-wave plate at angle psi (fast axis from H), acting on a subset
//     of paths: Jones matrix [[cos 2psi, sin 2psi], [sin 2psi, -cos 2psi]].
//     Every HWP has determinant -1; a plate at psi + pi/2 equals minus the
//     plate at psi, so a half-turn offset is the same thing as a pi relative
//     phase between the interferometer arms.
//   - Beam displacer: transmits V on its path, walks H to the other path
//     (|p, V> -> |p, V>, |p, H> -> |p xor 1, H>).
//
// Two circuit variants are provided. The two-output-port variant performs
// the full two-outcome measurement in the basis
// |phi> = cos(phi)|H> + sin(phi)|V>: outcome +1 exits on path 0, outcome -1
// on path 1. The single-output variant post-selects one outcome branch.
//
// Plate angles: the outer plates sit at phi/2 (map |phi> <-> |H>) and the
// path-1 inner plate at theta/2. The path-0 inner plate carries the nominal
// pi/4 - theta/2 plus a half-turn, which fixes the relative arm phase the
// nominal angle listing leaves free; without it the compiled operators pick
// up a relative sign between the polarization rails (every HWP has det -1)
// and cannot match the nonnegative Kraus pair. The -1 output port's
// restoring plate sits at phi/2 + pi/4, the same angle the single-port
// variant uses to select the -1 branch.
//
// Angles are radians in this API; the JSON exchange format uses degrees.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "seqbell/qcore.hpp"

namespace seqbell::optics {

// Path (x) polarization amplitudes, basis order as above.
using ModeVector = Eigen::Vector4cd;

struct OpticalElement {
    enum class Kind { hwp, bd };

    Kind kind = Kind::bd;
    double angle = 0.0;      // radians; HWP only
    unsigned path_mask = 0;  // HWP only; bit p set = plate covers path p
    std::string label;

    static OpticalElement hwp(std::string label, double angle,
                              unsigned path_mask);
    static OpticalElement bd(std::string label);

    // 4x4 action on the mode space.
    Eigen::Matrix4cd mode_matrix() const;
};

struct Circuit {
    enum class Readout {
        two_port,    // outcome +1 = path 0, outcome -1 = path 1
        single_port  // one retained branch exits on path 0
    };

    std::vector<OpticalElement> elements;
    Readout readout = Readout::two_port;
    int selected = +1;  // single_port only: which outcome the branch keeps

    // Ordered product of element matrices; throws if the composition is not
    // unitary within equivalence_tol.
    Eigen::Matrix4cd transfer() const;
};

// Jones matrix of a half-wave plate at `angle`.
Eigen::Matrix2cd hwp_matrix(double angle);

// Mode-space matrix of a beam displacer.
Eigen::Matrix4cd bd_matrix();

// Interferometer performing the strength-theta measurement in the
// polarization basis at angle phi, both outcome ports kept.
Circuit build_two_port_circuit(double theta, double phi);

// Post-selected variant keeping only the `select` (+1 or -1) branch.
Circuit build_single_port_circuit(double theta, double phi, int select);

// Extracts the 2x2 polarization operators seen from input path 0 to each
// designated output port: {+1 port, -1 port} for two_port circuits, a
// single selected branch for single_port ones.
std::vector<Eigen::Matrix2cd> compile_to_kraus(const Circuit& circuit);

// Largest entrywise deviation between paired operators after minimizing
// each pair's distance over a global phase. Lists must have equal length.
double verify_equivalence(const std::vector<Eigen::Matrix2cd>& compiled,
                          const std::vector<Eigen::Matrix2cd>& reference);

// JSON exchange format (element kind, angle in degrees, path mask).
std::string circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const std::string& text);

}  // namespace seqbell::optics
