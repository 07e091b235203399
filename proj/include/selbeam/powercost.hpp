// SPDX-License-Identifier: Apache-2.0
//
// Phased-array power consumption model (PA, DAC, RF chain) and the GPGDA
// per-iteration flop/energy cost model. Reporting-only; these quantities
// never enter the optimization.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace selbeam {

struct RfPowerParams {
    int q = 1;            // DAC resolution [bits]
    double f = 0.0;       // sampling rate [Hz]
    double c1 = 0.0;      // static DAC coefficient [W per bit*Hz]
    double c2 = 0.0;      // dynamic DAC coefficient [W]
    double p_m = 0.0;     // mixer power [W]
    double p_lf = 0.0;    // low-pass filter power [W]
    double p_hb = 0.0;    // hybrid-with-buffer power [W]
    double eta_pa = 1.0;  // PA efficiency

    void validate() const {
        if (q < 1) throw std::invalid_argument("RfPowerParams: q must be >= 1");
        if (f < 0 || c1 < 0 || c2 < 0 || p_m < 0 || p_lf < 0 || p_hb < 0)
            throw std::invalid_argument("RfPowerParams: negative parameter");
        if (!(eta_pa > 0 && eta_pa <= 1))
            throw std::invalid_argument("RfPowerParams: eta_pa must be in (0,1]");
    }
};

struct OpEnergyParams {
    double p_mul = 0.0;  // energy per complex multiplication [J]
    double p_add = 0.0;  // energy per complex addition [J]
};

struct FlopCount {
    std::uint64_t muls = 0;
    std::uint64_t adds = 0;
};

inline double pa_power(double transmit_power, double eta_pa) {
    if (!(eta_pa > 0)) throw std::invalid_argument("pa_power: eta_pa must be > 0");
    if (!(transmit_power >= 0)) throw std::invalid_argument("pa_power: negative transmit power");
    return transmit_power / eta_pa;
}

inline double dac_power(const RfPowerParams& params) {
    params.validate();
    return params.c1 * params.f * params.q + params.c2 * std::exp2(params.q);
}

inline double rf_chain_power(const RfPowerParams& params) {
    params.validate();
    return 2.0 * params.p_m + 2.0 * params.p_lf + params.p_hb;
}

// Total base-station draw with the RF overhead charged per active antenna.
inline double total_system_power(double transmit_power, int n_active,
                                 const RfPowerParams& params) {
    if (n_active < 0) throw std::invalid_argument("total_system_power: n_active must be >= 0");
    return pa_power(transmit_power, params.eta_pa) +
           n_active * (2.0 * dac_power(params) + rf_chain_power(params));
}

// Per-iteration complex operation counts of GPGDA:
// muls = n_t^2 m + n_t^3 + 5 n_t m, adds = n_t^2 m + n_t^3 + 3 n_t m - n_t^2.
inline FlopCount iteration_flops(int n_t, int m) {
    if (n_t < 1 || m < 1) throw std::invalid_argument("iteration_flops: n_t, m must be >= 1");
    const std::uint64_t nt = static_cast<std::uint64_t>(n_t);
    const std::uint64_t mm = static_cast<std::uint64_t>(m);
    FlopCount c;
    c.muls = nt * nt * mm + nt * nt * nt + 5 * nt * mm;
    c.adds = nt * nt * mm + nt * nt * nt + 3 * nt * mm - nt * nt;
    return c;
}

inline double iteration_energy(int n_t, int m, const OpEnergyParams& params) {
    if (params.p_mul < 0 || params.p_add < 0)
        throw std::invalid_argument("iteration_energy: negative energy parameter");
    const FlopCount c = iteration_flops(n_t, m);
    return static_cast<double>(c.muls) * params.p_mul + static_cast<double>(c.adds) * params.p_add;
}

}  // namespace selbeam
