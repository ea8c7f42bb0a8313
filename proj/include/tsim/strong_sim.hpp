#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "catalog.hpp"
#include "parallel.hpp"
#include "pauli.hpp"
#include "stabilizer.hpp"

namespace tsim {

enum class SimMode { Exact, Sampled };

struct SimulationTask {
    int t = 0;
    int n = 0;  // total qubits, n >= t; the last n - t start in |0>
    PauliProjector projector;
    SimMode mode = SimMode::Exact;
    double epsilon = 0.1;
    double p_f = 0.05;
    uint64_t samples = 0;  // overrides L when non-zero
    uint64_t seed = 0;
    std::vector<int> policy = default_policy();
    int threads = 1;
};

struct SimulationResult {
    double value = 0;
    std::optional<ExactAmplitude> exact;  // exact mode only
    uint64_t terms = 0;                   // χ of the decomposition used
    uint64_t surviving_terms = 0;         // terms not annihilated by the projector
    uint64_t inner_products_evaluated = 0;
    uint64_t samples_used = 0;
    double std_error = 0;  // sampled mode, from the spread of per-sample terms
    double wall_time = 0;
};

inline uint64_t sample_count(double epsilon, double p_f) {
    if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
    if (!(p_f > 0 && p_f < 1)) throw std::invalid_argument("p_f must be in (0, 1)");
    return (uint64_t)std::ceil(std::log(1 / p_f) / (epsilon * epsilon));
}

struct ProjectedTerm {
    ExactAmplitude coeff;
    std::optional<StabilizerState> state;  // Π|φ>, empty if annihilated
};

// Applies the projector factors ket-side, one measure_pauli per factor.
inline std::vector<ProjectedTerm> project_terms(const MagicDecomposition& dec, const PauliProjector& proj, int threads) {
    if (!proj.factors().empty() && proj.qubits() != dec.qubits())
        throw std::invalid_argument("projector acts on " + std::to_string(proj.qubits()) + " qubits, decomposition on " +
                                    std::to_string(dec.qubits()));
    std::vector<ProjectedTerm> out(dec.size());
    parallel_for(dec.size(), threads, [&](size_t i) {
        out[i].coeff = dec.terms[i].coeff;
        std::optional<StabilizerState> s = dec.terms[i].state;
        for (auto& [P, sign] : proj.factors()) {
            auto r = measure_pauli(*s, P, sign);
            s = std::move(r.state);
            if (!s) break;
        }
        out[i].state = std::move(s);
    });
    return out;
}

// Σ_{j,l} c_j* c_l <φ_j|Π|φ_l>
inline SimulationResult exact_expectation(const MagicDecomposition& dec, const PauliProjector& proj, int threads = 1) {
    auto start = std::chrono::steady_clock::now();
    auto proj_terms = project_terms(dec, proj, threads);
    std::vector<size_t> alive;
    for (size_t l = 0; l < proj_terms.size(); ++l)
        if (proj_terms[l].state) alive.push_back(l);
    std::vector<ExactAmplitude> row(dec.size());
    parallel_for(dec.size(), threads, [&](size_t j) {
        ExactAmplitude acc;
        for (size_t l : alive) acc += proj_terms[l].coeff * inner_product(dec.terms[j].state, *proj_terms[l].state);
        row[j] = dec.terms[j].coeff.conj() * acc;
    });
    ExactAmplitude total;
    for (auto& r : row) total += r;
    if (!total.is_real()) throw std::logic_error("exact expectation has a non-zero imaginary part");
    SimulationResult res;
    res.exact = total;
    res.value = total.to_complex().real();
    res.terms = dec.size();
    res.surviving_terms = alive.size();
    res.inner_products_evaluated = dec.size() * alive.size();
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

// d/L Σ_a |<ψ_a|Π Ψ>|² over uniformly random stabilizer states ψ_a, d = 2^n.
// E|<ψ|v>|² = <v|v>/d for a uniform stabilizer state, which fixes the factor d.
inline SimulationResult sampled_expectation(const MagicDecomposition& dec, const PauliProjector& proj, uint64_t L,
                                            uint64_t seed, int threads = 1) {
    if (L == 0) throw std::invalid_argument("sample count must be positive");
    auto start = std::chrono::steady_clock::now();
    const int n = dec.qubits();
    auto proj_terms = project_terms(dec, proj, threads);
    std::vector<size_t> alive;
    for (size_t l = 0; l < proj_terms.size(); ++l)
        if (proj_terms[l].state) alive.push_back(l);
    const double d = std::ldexp(1.0, n);
    std::vector<double> x(L, 0.0);
    if (!alive.empty()) {
        parallel_for(L, threads, [&](size_t a) {
            auto rng = item_rng(seed, a);
            StabilizerState psi = n > 0 ? random_stabilizer_state(n, rng) : StabilizerState::zeros(0);
            ExactAmplitude amp;
            for (size_t l : alive) amp += proj_terms[l].coeff * inner_product(psi, *proj_terms[l].state);
            x[a] = d * std::norm(amp.to_complex());
        });
    }
    double sum = 0, sq = 0;
    for (double v : x) sum += v;
    double mean = sum / double(L);
    for (double v : x) sq += (v - mean) * (v - mean);
    SimulationResult res;
    res.value = mean;
    res.terms = dec.size();
    res.surviving_terms = alive.size();
    res.inner_products_evaluated = L * alive.size();
    res.samples_used = L;
    res.std_error = L > 1 ? std::sqrt(sq / double(L - 1) / double(L)) : 0;
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

inline MagicDecomposition task_decomposition(const SimulationTask& task) {
    int n = task.n ? task.n : task.t;
    if (n < task.t) throw std::invalid_argument("n must be at least t");
    return BlockedDecomposition(task.t, n, task.policy).materialize();
}

inline SimulationResult run_task(const SimulationTask& task) {
    auto dec = task_decomposition(task);
    if (!task.projector.factors().empty() && task.projector.qubits() != dec.qubits())
        throw std::invalid_argument("projector qubit count does not match n");
    if (task.mode == SimMode::Exact) return exact_expectation(dec, task.projector, task.threads);
    uint64_t L = task.samples ? task.samples : sample_count(task.epsilon, task.p_f);
    return sampled_expectation(dec, task.projector, L, task.seed, task.threads);
}

}  // namespace tsim
