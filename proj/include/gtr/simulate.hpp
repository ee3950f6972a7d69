// Copyright 2026 The GTR Model Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Monte Carlo realization of the breaking process: every trial draws an
// actual breaking point for each elastic and moves the particle to the
// anchor it collapses toward.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <thread>
#include <vector>

#include "gtr/distributions.hpp"
#include "gtr/forward.hpp"

namespace gtr {

enum class Order { AB, BA };

inline std::string_view to_string(Order o) { return o == Order::AB ? "AB" : "BA"; }

inline Order parse_order(std::string_view s) {
    if (s == "AB" || s == "ab") return Order::AB;
    if (s == "BA" || s == "ba") return Order::BA;
    fail(ErrorKind::validation, "order must be AB or BA");
}

struct SimulationCounts {
    Order order = Order::AB;
    std::uint64_t trials = 0;
    std::array<std::uint64_t, 4> counts{};  // yy, yn, ny, nn

    /// Counts from disjoint streams add; the merge is associative and commutative.
    SimulationCounts& operator+=(const SimulationCounts& o) {
        trials += o.trials;
        for (std::size_t i = 0; i < 4; ++i) counts[i] += o.counts[i];
        return *this;
    }

    Quad<double> frequencies() const {
        Quad<double> q;
        for (std::size_t i = 0; i < 4; ++i) q[i] = trials ? double(counts[i]) / double(trials) : 0.0;
        return q;
    }

    /// (empirical - analytic) / sqrt(p (1 - p) / trials). A zero-variance
    /// entry reports 0 when it matches exactly and +-inf otherwise.
    std::array<double, 4> z_scores(const Quad<double>& analytic) const {
        std::array<double, 4> z{};
        const auto f = frequencies();
        for (std::size_t i = 0; i < 4; ++i) {
            const double p = analytic[i];
            const double sd = std::sqrt(std::max(p * (1.0 - p), 0.0) / double(trials));
            const double diff = f[i] - p;
            if (sd > 0.0) {
                z[i] = diff / sd;
            } else {
                z[i] = std::fabs(diff) < 1e-15 ? 0.0 : std::copysign(INFINITY, diff);
            }
        }
        return z;
    }
};

namespace detail {

inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace detail

/// Runs `trials` trials of one order on a single random stream.
inline SimulationCounts simulate_stream(const BreakDensity<double>& rhoA, const BreakDensity<double>& rhoB,
                                        const AngleTriple<double>& angles, Order order, std::uint64_t trials,
                                        std::uint64_t seed, std::uint64_t stream = 0) {
    auto rng = detail::stream_engine(seed, stream);
    const auto& first = order == Order::AB ? rhoA : rhoB;
    const auto& second = order == Order::AB ? rhoB : rhoA;
    const double firstLanding = order == Order::AB ? angles.cosThetaA : angles.cosThetaB;
    const double c = angles.cosTheta;

    SimulationCounts out;
    out.order = order;
    out.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const double l1 = sample_break_point(first, rng);
        const bool y1 = breaks_to_yes(first, l1, firstLanding);
        const double landing2 = y1 ? c : -c;
        const double l2 = sample_break_point(second, rng);
        const bool y2 = breaks_to_yes(second, l2, landing2);
        ++out.counts[(y1 ? 0 : 2) + (y2 ? 0 : 1)];
    }
    return out;
}

/// Deterministic for a fixed (seed, streams). Trials are split evenly over
/// `streams` independent generators which run on their own threads.
inline SimulationCounts simulate(const BreakDensity<double>& rhoA, const BreakDensity<double>& rhoB,
                                 const AngleTriple<double>& angles, Order order, std::uint64_t trials,
                                 std::uint64_t seed, unsigned streams = 1) {
    if (trials == 0) fail(ErrorKind::validation, "simulate needs at least one trial");
    angles.validate();
    if (streams <= 1) return simulate_stream(rhoA, rhoB, angles, order, trials, seed, 0);

    std::vector<SimulationCounts> parts(streams);
    std::vector<std::thread> workers;
    for (unsigned s = 0; s < streams; ++s) {
        const std::uint64_t share = trials / streams + (s < trials % streams ? 1 : 0);
        workers.emplace_back([&, s, share] { parts[s] = simulate_stream(rhoA, rhoB, angles, order, share, seed, s); });
    }
    for (auto& w : workers) w.join();
    SimulationCounts total;
    total.order = order;
    for (const auto& p : parts) total += p;
    return total;
}

inline SimulationCounts simulate(const ModelParams<double>& m, Order order, std::uint64_t trials,
                                 std::uint64_t seed, unsigned streams = 1) {
    m.validate();
    return simulate(locally_uniform(m.A), locally_uniform(m.B), m.angles, order, trials, seed, streams);
}

}  // namespace gtr
