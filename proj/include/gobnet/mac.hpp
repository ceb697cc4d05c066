// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/**
 * @file mac.hpp
 * @brief Downlink link-layer analysis for one drop: NOMA power allocation and
 * SIC ordering, MRC-combined SINR for NOMA and OFDMA, per-user rate, sum rate
 * and Jain's fairness index.
 *
 * All quantities are linear; dB appears only at I/O boundaries.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "receiver.hpp"

namespace gobnet
{

enum class Scheme
{
    noma,
    ofdma
};

inline std::string_view to_string(Scheme s) { return s == Scheme::noma ? "noma" : "ofdma"; }

inline Scheme parse_scheme(std::string_view s)
{
    if (s == "noma" || s == "NOMA")
        return Scheme::noma;
    if (s == "ofdma" || s == "OFDMA")
        return Scheme::ofdma;
    throw InvalidArgument("unknown multiple-access scheme '" + std::string(s) + "'");
}

struct MacConfig
{
    Scheme scheme = Scheme::noma;
    int fft_size = 1024;
    double target_ber = 1e-3;
    double bandwidth = 2e9;
    double tx_power = 10e-3;

    /// Subcarrier utilization xi = (N - 2) / N.
    double utilization() const { return (fft_size - 2.0) / fft_size; }
    /// Time-domain power normalization zeta = sqrt(N / (N - 2)).
    double zeta() const { return std::sqrt(static_cast<double>(fft_size) / (fft_size - 2.0)); }
    /// SNR gap Gamma of adaptive QAM at the target BER.
    double snr_gap() const { return -std::log(5.0 * target_ber) / 1.5; }
    /// Electrical signal power P_elec = Pt^2 / 9 (negligible clipping).
    double electrical_power() const { return tx_power * tx_power / 9.0; }
    /// gamma = xi^2 / (R_PD^2 P_elec), the noise scaling in the SINR.
    double noise_scale(double responsivity) const
    {
        const double xi = utilization();
        return xi * xi / (responsivity * responsivity * electrical_power());
    }

    void validate() const
    {
        if (fft_size <= 2)
            throw InvalidArgument("MacConfig: FFT size must exceed 2");
        if (!(target_ber > 0.0 && 5.0 * target_ber < 1.0))
            throw InvalidArgument("MacConfig: target BER must lie in (0, 0.2)");
        if (!(bandwidth > 0.0) || !(tx_power > 0.0))
            throw InvalidArgument("MacConfig: bandwidth and transmit power must be positive");
    }
};

/// a_k = sqrt((K - k + 1) / s) with s = K (K + 1) / 2; index 0 is the weakest user.
inline std::vector<double> noma_power_coefficients(int users)
{
    if (users < 1)
        throw InvalidArgument("noma_power_coefficients: need at least one user");
    const double alloc_normalizer = users * (users + 1.0) / 2.0;
    std::vector<double> a(static_cast<std::size_t>(users));
    for (int k = 1; k <= users; ++k)
        a[static_cast<std::size_t>(k - 1)] = std::sqrt((users - k + 1) / alloc_normalizer);
    return a;
}

/// UE ids sorted by ascending gain, ties by ascending id. The last entry is
/// the strongest user and decodes everyone else.
inline std::vector<int> noma_order(std::span<const int> ue_ids, std::span<const double> gains)
{
    if (ue_ids.size() != gains.size() || ue_ids.empty())
        throw InvalidArgument("noma_order: need one gain per user and at least one user");
    std::vector<std::size_t> idx(ue_ids.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b)
              {
                  if (gains[a] != gains[b])
                      return gains[a] < gains[b];
                  return ue_ids[a] < ue_ids[b];
              });
    std::vector<int> order;
    order.reserve(idx.size());
    for (auto i : idx)
        order.push_back(ue_ids[i]);
    return order;
}

/// What one UE sees: per-element gains to its serving cluster and to every
/// active interfering cluster, plus its per-element noise variances.
struct UserChannel
{
    ElementVector serving{};
    std::vector<ElementVector> interferers;
    ElementVector noise_variance{};
};

namespace detail
{
inline double combine(const ElementVector &w, const ElementVector &h)
{
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j)
        s += w[j] * h[j];
    return s;
}
} // namespace detail

/// MRC weights for user k (1-based SIC position) of a NOMA cluster.
inline ElementVector noma_mrc_weights(const UserChannel &ch, std::span<const double> coeffs, int k, double gamma,
                                      double zeta)
{
    const auto users = static_cast<int>(coeffs.size());
    const double ak = coeffs[static_cast<std::size_t>(k - 1)];
    double residual = 0.0;
    for (int l = k + 1; l <= users; ++l)
        residual += coeffs[static_cast<std::size_t>(l - 1)] * coeffs[static_cast<std::size_t>(l - 1)];

    ElementVector w{};
    for (std::size_t j = 0; j < kAdrElements; ++j)
    {
        const double h = ch.serving[j];
        double ici = 0.0;
        for (const auto &g : ch.interferers)
            ici += g[j] * g[j];
        const double den = residual * h * h + ici + gamma * ch.noise_variance[j];
        w[j] = den > 0.0 ? zeta * std::sqrt(gamma) * ak * h / den : 0.0;
    }
    return w;
}

/**
 * SINR of the user at SIC position k (1-based, ascending gain) in a NOMA
 * cluster whose ordered power coefficients are `coeffs`. Weaker users are
 * cancelled; stronger ones remain as residual MUI. Every interfering
 * cluster carries unit total power (sum of its a_l^2).
 */
inline double noma_sinr(const UserChannel &ch, std::span<const double> coeffs, int k, double gamma, double zeta)
{
    const auto users = static_cast<int>(coeffs.size());
    if (k < 1 || k > users)
        throw IndexOutOfRange("noma_sinr: SIC position " + std::to_string(k) + " outside 1.." +
                              std::to_string(users));
    const ElementVector w = noma_mrc_weights(ch, coeffs, k, gamma, zeta);
    const double ak = coeffs[static_cast<std::size_t>(k - 1)];
    double residual = 0.0;
    for (int l = k + 1; l <= users; ++l)
        residual += coeffs[static_cast<std::size_t>(l - 1)] * coeffs[static_cast<std::size_t>(l - 1)];

    const double wh = detail::combine(w, ch.serving);
    const double signal = (ak * wh) * (ak * wh);
    if (signal == 0.0)
        return 0.0;
    double den = residual * wh * wh;
    for (const auto &g : ch.interferers)
    {
        const double c = detail::combine(w, g);
        den += c * c;
    }
    double noise = 0.0;
    for (std::size_t j = 0; j < kAdrElements; ++j)
        noise += w[j] * w[j] * ch.noise_variance[j];
    den += gamma * noise;
    return signal / den;
}

inline void validate_allocation(std::span<const double> bandwidth_fractions, std::span<const double> power_fractions)
{
    auto check = [](std::span<const double> f, const char *what)
    {
        double s = 0.0;
        for (double v : f)
        {
            if (v < 0.0)
                throw AllocationInvalid(std::string("OFDMA ") + what + " fraction is negative");
            s += v;
        }
        if (std::abs(s - 1.0) > 1e-9)
            throw AllocationInvalid(std::string("OFDMA ") + what + " fractions sum to " + std::to_string(s) +
                                    ", expected 1");
    };
    check(bandwidth_fractions, "bandwidth");
    check(power_fractions, "power");
}

inline ElementVector ofdma_mrc_weights(const UserChannel &ch, double power_fraction, double bandwidth_fraction,
                                       double gamma, double zeta)
{
    ElementVector w{};
    for (std::size_t j = 0; j < kAdrElements; ++j)
    {
        double ici = 0.0;
        for (const auto &g : ch.interferers)
            ici += g[j] * g[j];
        const double den = ici + gamma * bandwidth_fraction * ch.noise_variance[j];
        w[j] = den > 0.0 ? zeta * std::sqrt(gamma * power_fraction) * ch.serving[j] / den : 0.0;
    }
    return w;
}

/// OFDMA SINR of user k (0-based within its cluster) under the cluster's
/// bandwidth and power split. Intra-cluster MUI is absent by construction.
inline double ofdma_sinr(const UserChannel &ch, std::span<const double> bandwidth_fractions,
                         std::span<const double> power_fractions, std::size_t k, double gamma, double zeta)
{
    if (bandwidth_fractions.size() != power_fractions.size() || k >= bandwidth_fractions.size())
        throw IndexOutOfRange("ofdma_sinr: user index outside the cluster allocation");
    validate_allocation(bandwidth_fractions, power_fractions);
    const double p = power_fractions[k];
    const double b = bandwidth_fractions[k];
    const ElementVector w = ofdma_mrc_weights(ch, p, b, gamma, zeta);
    const double wh = detail::combine(w, ch.serving);
    const double signal = p * wh * wh;
    if (signal == 0.0)
        return 0.0;
    double den = 0.0;
    for (const auto &g : ch.interferers)
    {
        const double c = detail::combine(w, g);
        den += c * c;
    }
    double noise = 0.0;
    for (std::size_t j = 0; j < kAdrElements; ++j)
        noise += w[j] * w[j] * ch.noise_variance[j];
    den += gamma * b * noise;
    return signal / den;
}

/// Achievable rate in bit/s; bandwidth_fraction is b_k under OFDMA, 1 for NOMA.
inline double user_rate(double sinr, const MacConfig &mac, double bandwidth_fraction = 1.0)
{
    if (sinr < 0.0)
        throw InvalidArgument("user_rate: SINR must be non-negative");
    const double full = mac.utilization() * mac.bandwidth * std::log2(1.0 + sinr / mac.snr_gap());
    return mac.scheme == Scheme::ofdma ? bandwidth_fraction * full : full;
}

struct NetworkMetrics
{
    double sum_rate = 0.0;
    double jain = 0.0;
    bool all_zero = false; // J undefined; reported as 0
};

inline NetworkMetrics network_metrics(std::span<const double> rates)
{
    if (rates.empty())
        throw InvalidArgument("network_metrics: need at least one user");
    double s = 0.0, s2 = 0.0;
    for (double r : rates)
    {
        s += r;
        s2 += r * r;
    }
    NetworkMetrics m;
    m.sum_rate = s;
    if (s2 == 0.0)
    {
        m.all_zero = true;
        return m;
    }
    m.jain = s * s / (static_cast<double>(rates.size()) * s2);
    return m;
}

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

} // namespace gobnet
