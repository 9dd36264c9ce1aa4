#include "seqbell/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace seqbell::montecarlo {

using qcore::ComplexMatrix;
using qcore::DensityMatrix;

void validate_config(const ExperimentConfig& cfg) {
    if (!(cfg.pair_rate > 0.0) || !std::isfinite(cfg.pair_rate)) {
        throw std::invalid_argument("config field 'pair_rate' must be > 0");
    }
    if (!(cfg.window > 0.0) || !std::isfinite(cfg.window)) {
        throw std::invalid_argument("config field 'window' must be > 0");
    }
    if (!(cfg.vis_zx >= 0.0 && cfg.vis_zx <= 1.0)) {
        throw std::invalid_argument("config field 'vis_zx' must be in [0, 1]");
    }
    if (!(cfg.vis_diag >= 0.0 && cfg.vis_diag <= 1.0)) {
        throw std::invalid_argument(
            "config field 'vis_diag' must be in [0, 1]");
    }
    if (cfg.vis_diag > cfg.vis_zx) {
        throw std::invalid_argument(
            "config field 'vis_diag' exceeds 'vis_zx'; no state in the noise "
            "model produces this visibility pair");
    }
    if (cfg.thetas.empty()) {
        throw std::invalid_argument("config field 'thetas' must be nonempty");
    }
    constexpr double half_pi = 1.57079632679489662;
    for (double t : cfg.thetas) {
        if (!(t >= 0.0 && t <= half_pi + qcore::structural_tol)) {
            throw std::invalid_argument(
                "config field 'thetas' has an entry outside [0, pi/2]");
        }
    }
}

DensityMatrix noisy_state(double vis_zx, double vis_diag) {
    if (!(vis_zx >= 0.0 && vis_zx <= 1.0)) {
        throw std::invalid_argument("noisy_state: vis_zx outside [0, 1]");
    }
    if (!(vis_diag >= 0.0 && vis_diag <= 1.0)) {
        throw std::invalid_argument("noisy_state: vis_diag outside [0, 1]");
    }
    if (vis_diag > vis_zx) {
        throw std::invalid_argument(
            "noisy_state: vis_diag > vis_zx is infeasible in the "
            "dephasing + white-noise model");
    }
    const double w = 1.0 - vis_zx;
    const double lambda = vis_zx > 0.0 ? 1.0 - vis_diag / vis_zx : 0.0;

    ComplexMatrix rho = qcore::singlet().mat;
    rho(1, 2) *= 1.0 - lambda;  // dephasing hits only the H/V coherences
    rho(2, 1) *= 1.0 - lambda;
    rho = (1.0 - w) * rho +
          w * 0.25 * ComplexMatrix::Identity(4, 4);
    DensityMatrix out(std::move(rho));

    // The closed-form inversion is exact; make sure of it anyway.
    if (std::abs(visibility_zx(out) - vis_zx) > 1e-9 ||
        std::abs(visibility_diag(out) - vis_diag) > 1e-9) {
        throw std::logic_error("noisy_state: visibility round-trip failed");
    }
    return out;
}

namespace {

double contrast(const DensityMatrix& rho, const qcore::BlochDirection& axis) {
    double anti = 0.0, corr = 0.0;
    for (int i : {+1, -1}) {
        for (int j : {+1, -1}) {
            const ComplexMatrix pij = qcore::tensor(
                qcore::projector(axis, i), qcore::projector(axis, j));
            const double p = (pij * rho.mat).trace().real();
            (i == j ? corr : anti) += p;
        }
    }
    if (anti + corr <= 0.0) {
        throw std::invalid_argument("visibility: zero total probability");
    }
    return (anti - corr) / (anti + corr);
}

}  // namespace

double visibility_zx(const DensityMatrix& rho) {
    return contrast(rho, qcore::BlochDirection(1.0, 0.0));
}

double visibility_diag(const DensityMatrix& rho) {
    return contrast(rho, qcore::BlochDirection(0.0, 1.0));
}

CountRecord sample_counts(const bell::JointDistribution& jd,
                          const ExperimentConfig& cfg,
                          const rng::SubstreamRng& rng) {
    if (cfg.pair_rate < 0.0 || cfg.window < 0.0) {
        throw std::invalid_argument("sample_counts: negative rate or window");
    }
    const double mean = cfg.pair_rate * cfg.window;
    CountRecord rec;
    for (int x = 0; x < 2; ++x) {
        for (int y1 = 0; y1 < 2; ++y1) {
            for (int y2 = 0; y2 < 2; ++y2) {
                auto eng = rng.stream(std::uint64_t(4 * x + 2 * y1 + y2));
                std::int64_t remaining = 0;
                if (mean > 0.0) {
                    std::poisson_distribution<std::int64_t> poisson(mean);
                    remaining = poisson(eng);
                }
                // Multinomial split by chained binomials.
                double prob_left = 1.0;
                for (int o = 0; o < 8; ++o) {
                    const double p = std::clamp(
                        jd.p(x, y1, y2, o >> 2, (o >> 1) & 1, o & 1), 0.0,
                        1.0);
                    if (o == 7 || prob_left <= p) {
                        rec.tallies[x][y1][y2][o] = remaining;
                        remaining = 0;
                        break;
                    }
                    const double q = std::clamp(p / prob_left, 0.0, 1.0);
                    std::int64_t n = 0;
                    if (remaining > 0 && q > 0.0) {
                        std::binomial_distribution<std::int64_t> binomial(
                            remaining, q);
                        n = binomial(eng);
                    }
                    rec.tallies[x][y1][y2][o] = n;
                    remaining -= n;
                    prob_left -= p;
                }
            }
        }
    }
    return rec;
}

namespace {

struct BlockStat {
    double r;    // empirical correlation
    double var;  // first-order variance of r
};

// Correlation of the +-1 product selected by `sign` over one setting block.
template <typename SignFn>
BlockStat block_correlation(const std::array<std::int64_t, 8>& tallies,
                            SignFn sign) {
    std::int64_t n_total = 0;
    for (std::int64_t n : tallies) n_total += n;
    if (n_total == 0) {
        throw std::runtime_error(
            "estimate_svalues: empty setting block (no counts)");
    }
    double r = 0.0;
    for (int o = 0; o < 8; ++o) r += sign(o) * double(tallies[o]);
    r /= double(n_total);
    double var = 0.0;
    for (int o = 0; o < 8; ++o) {
        const double d = sign(o) - r;
        var += double(tallies[o]) * d * d;
    }
    var /= double(n_total) * double(n_total);
    return BlockStat{r, var};
}

double sign_a(int o) { return (o & 4) ? -1.0 : 1.0; }
double sign_b1(int o) { return (o & 2) ? -1.0 : 1.0; }
double sign_b2(int o) { return (o & 1) ? -1.0 : 1.0; }

SEstimate finish(double signed_s, double var) {
    const double s = std::abs(signed_s);
    const double sigma = std::sqrt(var);
    if (!(sigma > 0.0)) {
        throw std::runtime_error(
            "estimate_svalues: degenerate counts give zero standard error");
    }
    return SEstimate{s, sigma, (s - 2.0) / sigma};
}

}  // namespace

SEstimatePair estimate_svalues(const CountRecord& counts) {
    // A-B1: correlations indexed by (x, y1), Bob2's setting averaged.
    double s1 = 0.0, var1 = 0.0;
    for (int x = 0; x < 2; ++x) {
        for (int y1 = 0; y1 < 2; ++y1) {
            double c = 0.0, var_c = 0.0;
            for (int y2 = 0; y2 < 2; ++y2) {
                const BlockStat st = block_correlation(
                    counts.tallies[x][y1][y2],
                    [](int o) { return sign_a(o) * sign_b1(o); });
                c += 0.5 * st.r;
                var_c += 0.25 * st.var;
            }
            const double coeff = (x == 1 && y1 == 1) ? -1.0 : 1.0;
            s1 += coeff * c;
            var1 += var_c;
        }
    }
    // A-B2: correlations indexed by (x, y2), Bob1's setting averaged.
    double s2 = 0.0, var2 = 0.0;
    for (int x = 0; x < 2; ++x) {
        for (int y2 = 0; y2 < 2; ++y2) {
            double c = 0.0, var_c = 0.0;
            for (int y1 = 0; y1 < 2; ++y1) {
                const BlockStat st = block_correlation(
                    counts.tallies[x][y1][y2],
                    [](int o) { return sign_a(o) * sign_b2(o); });
                c += 0.5 * st.r;
                var_c += 0.25 * st.var;
            }
            const double coeff = (x == 1 && y2 == 1) ? -1.0 : 1.0;
            s2 += coeff * c;
            var2 += var_c;
        }
    }
    return SEstimatePair{finish(s1, var1), finish(s2, var2)};
}

std::vector<ExperimentPoint> run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const DensityMatrix state = noisy_state(cfg.vis_zx, cfg.vis_diag);
    const bell::ScenarioSettings settings = bell::default_settings();

    std::vector<ExperimentPoint> out;
    out.reserve(cfg.thetas.size());
    for (std::size_t i = 0; i < cfg.thetas.size(); ++i) {
        const bell::JointDistribution jd =
            bell::joint_distribution(state, settings, cfg.thetas[i]);
        const rng::SubstreamRng streams{cfg.seed, std::uint64_t(i)};
        ExperimentPoint pt;
        pt.theta = cfg.thetas[i];
        pt.counts = sample_counts(jd, cfg, streams);
        pt.estimates = estimate_svalues(pt.counts);
        out.push_back(std::move(pt));
    }
    return out;
}

}  // namespace seqbell::montecarlo
