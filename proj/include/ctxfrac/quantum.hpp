#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <thread>
#include <utility>
#include <vector>

#include "ctxfrac/builtin.hpp"
#include "ctxfrac/empirical.hpp"
#include "ctxfrac/errors.hpp"
#include "ctxfrac/fraction.hpp"
#include "ctxfrac/scenario.hpp"

namespace ctxfrac {

inline constexpr std::size_t kMaxQubits = 12;
inline constexpr double kPi = 3.14159265358979323846;

/// n-qubit pure state. Amplitude index bits follow the tensor order:
/// qubit 0 is the most significant bit.
struct PureState {
    std::size_t qubits = 0;
    std::vector<std::complex<double>> amplitudes;

    static PureState create(std::size_t qubits, std::vector<std::complex<double>> amplitudes) {
        if (qubits > kMaxQubits)
            throw SizeLimitExceeded("amplitude vector guard: at most " +
                                    std::to_string(kMaxQubits) + " qubits");
        if (amplitudes.size() != (std::size_t(1) << qubits))
            throw DomainMismatch("amplitude vector must have length 2^qubits");
        double norm2 = 0;
        for (const auto& a : amplitudes) norm2 += std::norm(a);
        if (std::fabs(norm2 - 1.0) > 1e-12)
            throw DomainMismatch("state is not normalized (|norm^2 - 1| > 1e-12)");
        return PureState{qubits, std::move(amplitudes)};
    }
};

/// |0...0> + |1...1> over sqrt(2); n = 2 gives the Bell state Phi+.
inline PureState ghz_state(std::size_t n) {
    if (n < 2) throw DomainMismatch("GHZ states need at least 2 qubits");
    if (n > kMaxQubits) throw SizeLimitExceeded("amplitude vector guard");
    std::vector<std::complex<double>> amps(std::size_t(1) << n, 0.0);
    amps.front() = 1.0 / std::sqrt(2.0);
    amps.back() = 1.0 / std::sqrt(2.0);
    return PureState{n, std::move(amps)};
}

/// An equatorial measurement direction: the observable
/// cos(phi) X + sin(phi) Y. Angles live in [0, pi); phi and phi + pi are
/// the same measurement with outcomes swapped.
struct EquatorialSetting {
    double angle = 0.0;

    static EquatorialSetting create(double phi) {
        if (!(phi >= 0.0) || !(phi < kPi))
            throw DomainMismatch("equatorial angle must lie in [0, pi)");
        return EquatorialSetting{phi};
    }
};

namespace detail {

/// In-place application of the projector (I + sign (cos X + sin Y))/2 on
/// one qubit, by stride arithmetic on the amplitude vector.
inline void apply_equatorial_projector(std::vector<std::complex<double>>& amps,
                                       std::size_t qubits, std::size_t qubit, double phi,
                                       int sign) {
    std::complex<double> phase(std::cos(phi), std::sin(phi));
    std::complex<double> up = 0.5 * double(sign) * std::conj(phase);
    std::complex<double> down = 0.5 * double(sign) * phase;
    std::size_t stride = std::size_t(1) << (qubits - 1 - qubit);
    for (std::size_t base = 0; base < amps.size(); base += 2 * stride)
        for (std::size_t i = base; i < base + stride; ++i) {
            std::complex<double> a0 = amps[i];
            std::complex<double> a1 = amps[i + stride];
            amps[i] = 0.5 * a0 + up * a1;
            amps[i + stride] = down * a0 + 0.5 * a1;
        }
}

}  // namespace detail

/// Born-rule empirical model on the (n,2,2) scenario: party j measures at
/// settings[j].first (measurement 1) or settings[j].second (measurement 2);
/// outcome "0" is the +1 eigenvalue. The result is validated as
/// no-signalling at 1e-7 — a failure is an internal consistency error.
inline EmpiricalModel<double> born_model(
    const PureState& state,
    const std::vector<std::pair<EquatorialSetting, EquatorialSetting>>& settings) {
    std::size_t n = state.qubits;
    if (settings.size() != n)
        throw DomainMismatch("need one pair of settings per qubit");
    auto scenario = bell_scenario(n);
    std::size_t contexts = std::size_t(1) << n;
    std::vector<std::vector<double>> tables(contexts);
    for (std::size_t q = 0; q < contexts; ++q) {
        tables[q].assign(contexts, 0.0);
        for (std::size_t s = 0; s < contexts; ++s) {
            auto amps = state.amplitudes;
            for (std::size_t j = 0; j < n; ++j) {
                bool second = (q >> (n - 1 - j)) & 1;
                double phi = second ? settings[j].second.angle : settings[j].first.angle;
                int sign = ((s >> (n - 1 - j)) & 1) ? -1 : 1;
                detail::apply_equatorial_projector(amps, n, j, phi, sign);
            }
            double p = 0;
            for (const auto& a : amps) p += std::norm(a);
            tables[q][s] = p;
        }
    }
    return EmpiricalModel<double>::create(std::move(scenario), std::move(tables), 1e-7);
}

/// Shared settings for every qubit.
inline EmpiricalModel<double> born_model(const PureState& state, EquatorialSetting phi1,
                                         EquatorialSetting phi2) {
    std::vector<std::pair<EquatorialSetting, EquatorialSetting>> settings(state.qubits,
                                                                          {phi1, phi2});
    return born_model(state, settings);
}

/// Rotates every qubit around the Z axis by phi (diag(e^{-i phi/2},
/// e^{i phi/2}) per qubit, global phase included).
inline PureState rotate_z_all(const PureState& state, double phi) {
    auto amps = state.amplitudes;
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        int ones = std::popcount(idx);
        double theta = 0.5 * phi * (2.0 * ones - double(state.qubits));
        amps[idx] *= std::complex<double>(std::cos(theta), std::sin(theta));
    }
    return PureState{state.qubits, std::move(amps)};
}

/// Contextual fraction over the [0,pi)^2 grid {i pi/G} x {j pi/G}, all
/// qubits sharing the swept settings. Row-major: entry [i*G + j] holds
/// (phi1, phi2) = (i pi/G, j pi/G). Grid points are independent; `jobs`
/// threads split them with deterministic assembly.
struct SweepGrid {
    std::size_t resolution = 0;
    std::vector<double> cf;  // row-major

    double at(std::size_t i, std::size_t j) const { return cf[i * resolution + j]; }
};

inline SweepGrid sweep(const PureState& state, std::size_t resolution, std::size_t jobs = 1,
                       std::size_t max_globals = kDefaultGlobalGuard) {
    if (resolution == 0) throw DomainMismatch("grid resolution must be positive");
    SweepGrid grid;
    grid.resolution = resolution;
    grid.cf.assign(resolution * resolution, 0.0);
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t cell = begin; cell < end; ++cell) {
            double phi1 = double(cell / resolution) * kPi / double(resolution);
            double phi2 = double(cell % resolution) * kPi / double(resolution);
            auto model = born_model(state, EquatorialSetting::create(phi1),
                                    EquatorialSetting::create(phi2));
            grid.cf[cell] = num::to_double(noncontextual_fraction(model, max_globals).cf);
        }
    };
    std::size_t cells = grid.cf.size();
    if (jobs <= 1) {
        worker(0, cells);
        return grid;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (cells + jobs - 1) / jobs;
    for (std::size_t t = 0; t < jobs && t * chunk < cells; ++t)
        pool.emplace_back(worker, t * chunk, std::min(cells, (t + 1) * chunk));
    for (auto& th : pool) th.join();
    return grid;
}

/// Equatorial angles ((n+k) pi / 2n, k pi / 2n) on the n-partite GHZ state
/// reproduce the strongly contextual GHZ-Mermin model up to relabelling:
/// checks cf = 1 within 1e-6.
inline bool proposition4_check(std::size_t n, std::size_t k,
                               std::size_t max_globals = kDefaultGlobalGuard) {
    if (n <= 2 || n > 6) throw DomainMismatch("proposition check expects 2 < n <= 6");
    if (k >= n) throw DomainMismatch("rotation step k must satisfy 0 <= k < n");
    double phi1 = double(n + k) * kPi / (2.0 * double(n));
    double phi2 = double(k) * kPi / (2.0 * double(n));
    auto model = born_model(ghz_state(n), EquatorialSetting::create(phi1),
                            EquatorialSetting::create(phi2));
    double cf = num::to_double(noncontextual_fraction(model, max_globals).cf);
    return std::fabs(cf - 1.0) <= 1e-6;
}

}  // namespace ctxfrac
