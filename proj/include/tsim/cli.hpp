#pragma once

// Command implementations for the tsim tool. Each writes to the given streams so
// the same code can be driven in-process by tests.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "catalog.hpp"
#include "dense_oracle.hpp"
#include "gauss_sum.hpp"
#include "parallel.hpp"
#include "strong_sim.hpp"

namespace tsim::cli {

using json = nlohmann::ordered_json;

inline std::string fmt_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw std::invalid_argument("not an integer list: \"" + s + "\"");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty integer list");
    return out;
}

inline double median(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// least-squares slope of y against x; a single point is fitted through the origin
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.empty()) return 0;
    if (x.size() == 1) return x[0] ? y[0] / x[0] : 0;
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
    return sxx ? sxy / sxx : 0;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
    std::string scope = "all";
    uint64_t samples = 200;  // random cases per kernel size and for gauss-k12
    uint64_t seed = 1;
    int threads = 1;
    std::string catalog_file;
};

struct Check {
    std::string name;
    uint64_t cases = 0, failures = 0;
    std::string detail;
};

inline Check verify_decomposition(const MagicDecomposition& d, const std::string& name, int expected_terms) {
    Check c{name, 1, 0, ""};
    auto rec = reconstruct_exact(d);
    auto ref = dense_magic_state_exact(d.k);
    bool ok = rec.size() == ref.amp.size() && std::equal(rec.begin(), rec.end(), ref.amp.begin());
    if (expected_terms >= 0 && (int)d.size() != expected_terms) ok = false;
    c.failures = ok ? 0 : 1;
    c.detail = "terms=" + std::to_string(d.size());
    return c;
}

inline std::vector<Check> verify_merges() {
    auto p = catalog_detail::t6_parts();
    auto r2 = ExactAmplitude::sqrt2();
    std::vector<Check> out;
    auto check = [&](const std::string& name, const StabilizerState& x, const StabilizerState& y,
                     const StabilizerState& merged) {
        auto a = to_dense_exact(tensor(x, y)), b = to_dense_exact(tensor(y, x)), m = to_dense_exact(merged);
        uint64_t bad = 0;
        for (size_t i = 0; i < m.size(); ++i)
            if (!(a[i] + b[i] == r2 * m[i])) ++bad;
        out.push_back({name, m.size(), bad, "amplitudes=" + std::to_string(m.size())});
    };
    check("merge-b60-b66", p.b60, p.b66, merged_b60_b66());
    check("merge-e6-o6", p.e6, p.o6, merged_e6_o6());
    return out;
}

inline Check verify_kernel(int n, uint64_t count, uint64_t seed, int threads) {
    std::vector<char> bad(count, 0);
    parallel_for(count, threads, [&](size_t i) {
        auto rng = item_rng(seed + 1000003ULL * n, i);
        auto a = random_stabilizer_state(n, rng), b = random_stabilizer_state(n, rng);
        auto da = to_dense(a), db = to_dense(b);
        cplx ref = 0;
        for (size_t x = 0; x < da.size(); ++x) ref += std::conj(da[x]) * db[x];
        if (std::abs(ref - inner_product(a, b).to_complex()) > 1e-10) bad[i] = 1;
        auto P = random_pauli(n, rng);
        int sign = (rng() & 1) ? 1 : -1;
        PauliProjector pr(n, {{P, sign}});
        double dn = dense_projector_expect(DenseState{n, da}, pr);
        if (std::abs(dn - measure_pauli(a, P, sign).norm.to_complex().real()) > 1e-10) bad[i] = 1;
    });
    Check c{"kernel-n" + std::to_string(n), count, 0, ""};
    for (char b : bad) c.failures += b;
    return c;
}

inline Check verify_gauss(int k, uint64_t samples, uint64_t seed, int threads) {
    bool exhaustive = k <= 6;
    uint64_t count = exhaustive ? (uint64_t(1) << (2 * k)) : samples;
    auto ref = dense_magic_state(k);
    std::vector<char> bad(count, 0);
    parallel_for(count, threads, [&](size_t i) {
        PauliOperator P;
        if (exhaustive) P = pauli_from_index(k, i);
        else {
            auto rng = item_rng(seed, i);
            P = random_pauli(k, rng);
        }
        auto r = expect_block(P);
        if (!r.exact.is_real() || std::abs(dense_pauli_expect(ref, P) - r.exact.to_complex()) > 1e-9) bad[i] = 1;
    });
    Check c{"gauss-k" + std::to_string(k), count, 0, exhaustive ? "exhaustive" : "sampled"};
    for (char b : bad) c.failures += b;
    return c;
}

inline Check verify_census(int k, uint64_t samples, uint64_t seed, int threads) {
    static const std::map<int, int> expected{{1, 2}, {2, 2}, {3, 3}, {6, 7}, {12, 42}};
    auto r = rank_census(k, k <= 6 ? 0 : samples, seed, threads);
    bool ok = k <= 6 ? r.max_count == expected.at(k) : r.max_count <= 42;
    return {"census-k" + std::to_string(k), r.evaluated, ok ? 0u : 1u, "max=" + std::to_string(r.max_count)};
}

inline Check verify_strong_sim(uint64_t seed, int threads) {
    Check c{"strong-sim-exact", 0, 0, ""};
    for (int t : {1, 2, 3, 6}) {
        for (uint64_t i = 0; i < 8; ++i) {
            auto rng = item_rng(seed + t, i);
            int n = t + 1;
            PauliProjector pr(n);
            auto P = random_pauli(n, rng);
            pr.add(P, (rng() & 1) ? 1 : -1);
            auto Q = random_pauli(n, rng);
            if (commute(P, Q)) pr.add(Q, 1);
            SimulationTask task;
            task.t = t;
            task.n = n;
            task.projector = pr;
            task.threads = threads;
            double got = run_task(task).value;
            double ref = dense_projector_expect(with_zeros(dense_magic_state(t), 1), pr);
            c.cases++;
            if (std::abs(got - ref) > 1e-10) c.failures++;
        }
    }
    return c;
}

inline int cmd_verify(const VerifyOptions& o, std::ostream& out) {
    static const std::vector<std::string> scopes{"all",      "decompositions", "merges",   "kernel",   "gauss-k1",
                                                 "gauss-k2", "gauss-k3",       "gauss-k6", "gauss-k12", "census",
                                                 "strong-sim"};
    if (o.catalog_file.empty() && std::find(scopes.begin(), scopes.end(), o.scope) == scopes.end())
        throw std::invalid_argument("unknown verify scope \"" + o.scope + "\"");
    std::vector<Check> checks;
    auto want = [&](const std::string& s) { return o.catalog_file.empty() && (o.scope == "all" || o.scope == s); };
    if (!o.catalog_file.empty()) {
        std::ifstream in(o.catalog_file);
        if (!in) throw std::runtime_error("cannot open " + o.catalog_file);
        auto d = read_decomposition(in);
        checks.push_back(verify_decomposition(d, "catalog-file-k" + std::to_string(d.k), -1));
    }
    if (want("decompositions")) {
        static const std::map<int, int> counts{{1, 2}, {2, 2}, {3, 3}, {6, 7}, {12, 47}};
        for (auto [k, n] : counts) checks.push_back(verify_decomposition(catalog_entry(k), "decomposition-k" + std::to_string(k), n));
    }
    if (want("merges"))
        for (auto& c : verify_merges()) checks.push_back(c);
    if (want("kernel"))
        for (int n = 2; n <= 8; ++n) checks.push_back(verify_kernel(n, o.samples, o.seed, o.threads));
    for (int k : {1, 2, 3, 6, 12})
        if (want("gauss-k" + std::to_string(k))) checks.push_back(verify_gauss(k, o.samples, o.seed, o.threads));
    if (want("census"))
        for (int k : {1, 2, 3, 6, 12}) checks.push_back(verify_census(k, o.samples, o.seed, o.threads));
    if (want("strong-sim")) checks.push_back(verify_strong_sim(o.seed, o.threads));

    bool all_ok = true;
    json j;
    j["scope"] = o.catalog_file.empty() ? o.scope : "catalog-file";
    j["checks"] = json::array();
    for (auto& c : checks) {
        all_ok = all_ok && c.failures == 0;
        j["checks"].push_back(
            {{"name", c.name}, {"passed", c.failures == 0}, {"cases", c.cases}, {"failures", c.failures}, {"detail", c.detail}});
    }
    j["passed"] = all_ok;
    out << j.dump(2) << "\n";
    return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------- expect

struct ExpectOptions {
    int t = 1;
    int n = -1;  // total qubits; defaults to the Pauli length
    std::string pauli;
    std::string mode = "gauss";
    std::string policy = "12,6,3,2,1";
    double epsilon = 0.1;
    double p_f = 0.05;
    uint64_t samples = 0;
    uint64_t seed = 0;
    int threads = 1;
    bool timing = false;
};

inline int cmd_expect(const ExpectOptions& o, std::ostream& out) {
    if (o.mode != "exact" && o.mode != "sampled" && o.mode != "gauss")
        throw std::invalid_argument("mode must be exact, sampled or gauss");
    if (o.t < 0) throw std::invalid_argument("t must be non-negative");
    auto policy = parse_int_list(o.policy);
    auto start = std::chrono::steady_clock::now();

    bool is_projector = o.pauli.find(',') != std::string::npos;
    PauliOperator P;
    PauliProjector proj;
    int n = o.n;
    if (o.pauli == "random") {
        n = n < 0 ? o.t : n;
        if (n < 1) throw std::invalid_argument("--pauli random needs at least one qubit");
        auto rng = item_rng(splitmix64(o.seed), 0);
        P = random_pauli(n, rng);
    } else if (is_projector) {
        proj = PauliProjector::parse(o.pauli);
        if (n >= 0 && n != proj.qubits()) throw std::invalid_argument("--n does not match the projector size");
        n = proj.qubits();
    } else if (!o.pauli.empty()) {
        P = PauliOperator::parse(o.pauli);
        if (n >= 0 && n != P.size()) throw std::invalid_argument("--n does not match the Pauli length");
        n = P.size();
    } else {
        throw std::invalid_argument("--pauli is required");
    }
    if (n < o.t) throw std::invalid_argument("Pauli acts on " + std::to_string(n) + " qubits but t=" + std::to_string(o.t));

    json j;
    j["t"] = o.t;
    j["n"] = n;
    j["mode"] = o.mode;
    j["policy"] = policy;
    j["blocks"] = plan_blocks(o.t, policy);

    if (o.mode == "gauss") {
        if (is_projector) throw std::invalid_argument("gauss mode takes a single Pauli, not a projector");
        auto r = expect_single_pauli(o.t, P, policy);
        j["pauli"] = P.to_string();
        j["observable"] = "pauli";
        j["value"] = r.value();
        j["imag"] = r.exact.to_complex().imag();
        j["exact"] = r.exact.to_tuple();
        if (P.hermitian()) j["projector_value"] = (1 + r.value()) / 2;
        j["unique_nonzero_sums"] = r.unique_nonzero_sums;
        json bl = json::array();
        for (auto& b : r.block_reports)
            bl.push_back({{"k", b.k}, {"set", b.active_set}, {"unique_nonzero_sums", b.unique_nonzero_sums}});
        j["block_reports"] = bl;
    } else {
        if (!is_projector) {
            if (!P.hermitian()) throw std::invalid_argument("exact and sampled modes need a Hermitian Pauli");
            int sign = P.omega_power() == 2 ? -1 : 1;
            PauliOperator Q = P;
            Q.set_omega_power(0);
            proj = PauliProjector(n, {{Q, sign}});
        }
        SimulationTask task;
        task.t = o.t;
        task.n = n;
        task.projector = proj;
        task.mode = o.mode == "exact" ? SimMode::Exact : SimMode::Sampled;
        task.epsilon = o.epsilon;
        task.p_f = o.p_f;
        task.samples = o.samples;
        task.seed = o.seed;
        task.policy = policy;
        task.threads = o.threads;
        auto r = run_task(task);
        if (is_projector) {
            j["projector"] = o.pauli;
            j["observable"] = "projector";
            j["value"] = r.value;
            if (r.exact) j["exact"] = r.exact->to_tuple();
        } else {
            j["pauli"] = P.to_string();
            j["observable"] = "pauli";
            j["value"] = 2 * r.value - 1;
            if (r.exact) j["exact"] = (ExactAmplitude::integer(2) * *r.exact - ExactAmplitude::one()).to_tuple();
            j["projector_value"] = r.value;
        }
        j["terms"] = r.terms;
        j["surviving_terms"] = r.surviving_terms;
        j["inner_products_evaluated"] = r.inner_products_evaluated;
        if (task.mode == SimMode::Sampled) {
            j["samples_used"] = r.samples_used;
            j["std_error"] = is_projector ? r.std_error : 2 * r.std_error;
            j["seed"] = o.seed;
        }
    }
    if (o.timing)
        j["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << j.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------- census

struct CensusOptions {
    int k = 6;
    std::string mode = "exhaustive";
    uint64_t samples = 100000;
    uint64_t seed = 0;
    int threads = 1;
};

inline json census_summary(const CensusResult& r, const CensusOptions& o) {
    return {{"k", r.k},          {"mode", o.mode},       {"paulis", r.evaluated}, {"seed", o.seed},
            {"max", r.max_count}, {"worst", r.worst.to_string()}};
}

// CSV histogram to csv; returns the summary record
inline json cmd_census(const CensusOptions& o, std::ostream& csv) {
    if (o.mode != "exhaustive" && o.mode != "sampled") throw std::invalid_argument("census mode must be exhaustive or sampled");
    if (o.mode == "sampled" && o.samples == 0) throw std::invalid_argument("sampled census needs --samples > 0");
    auto r = rank_census(o.k, o.mode == "exhaustive" ? 0 : o.samples, o.seed, o.threads);
    csv << "k,unique_nonzero_sums,paulis,is_max\n";
    for (auto [count, num] : r.histogram)
        csv << r.k << "," << count << "," << num << "," << (count == r.max_count ? 1 : 0) << "\n";
    return census_summary(r, o);
}

// ---------------------------------------------------------------- bench

struct BenchOptions {
    std::vector<int> ts{6, 12, 18};
    std::vector<std::string> policies{"6"};
    std::string mode = "gauss";
    int reps = 3;
    uint64_t seed = 0;
    uint64_t samples = 0;
    double epsilon = 0.1;
    double p_f = 0.05;
    std::string pauli;  // fixed projector for exact/sampled; identity if empty
    int threads = 1;
    bool timing = false;
};

struct BenchRow {
    std::string policy;
    int t;
    std::string blocks;
    uint64_t terms, work;
    double time;
};

// Worst-case Pauli per block size, by exhaustive census (k <= 6) or a fixed sampled search.
inline PauliOperator worst_block_pauli(int k, int threads) {
    static std::map<int, PauliOperator> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    auto r = rank_census(k, k <= 6 ? 0 : 20000, 12345, threads);
    return cache[k] = r.worst;
}

inline std::string join_ints(const std::vector<int>& v, char sep) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(v[i]);
    return s;
}

// CSV rows to csv; returns the fitted exponents per policy
inline json cmd_bench(const BenchOptions& o, std::ostream& csv) {
    if (o.mode != "exact" && o.mode != "sampled" && o.mode != "gauss")
        throw std::invalid_argument("mode must be exact, sampled or gauss");
    if (o.reps < 3) throw std::invalid_argument("--reps must be at least 3");
    std::vector<BenchRow> rows;
    json fits = json::array();
    for (auto& ptxt : o.policies) {
        auto policy = parse_int_list(ptxt);
        std::vector<double> xs, yt, yw, ytime;
        for (int t : o.ts) {
            auto blocks = plan_blocks(t, policy);
            BenchRow row{join_ints(policy, ' '), t, join_ints(blocks, ' '), 0, 0, 0};
            std::vector<double> times;
            if (o.mode == "gauss") {
                std::string worst;
                for (int b : blocks) worst += worst_block_pauli(b, o.threads).sites();
                auto r = expect_single_pauli(t, PauliOperator(worst, 0), policy);
                row.terms = row.work = r.unique_nonzero_sums;
                if (o.timing)
                    for (int rep = 0; rep < o.reps; ++rep) {
                        auto rng = item_rng(o.seed, uint64_t(t) * 1000 + rep);
                        auto P = random_pauli(std::max(t, 1), rng);
                        auto s = std::chrono::steady_clock::now();
                        expect_single_pauli(t, P, policy);
                        times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - s).count());
                    }
            } else {
                SimulationTask task;
                task.t = t;
                task.n = t;
                task.policy = policy;
                task.mode = o.mode == "exact" ? SimMode::Exact : SimMode::Sampled;
                task.samples = o.samples;
                task.epsilon = o.epsilon;
                task.p_f = o.p_f;
                task.seed = o.seed;
                task.threads = o.threads;
                if (!o.pauli.empty()) {
                    task.projector = PauliProjector::parse(o.pauli);
                    if (task.projector.qubits() != t)
                        throw std::invalid_argument("--pauli must act on t qubits for every benchmarked t");
                }
                int runs = o.timing ? o.reps : 1;
                for (int rep = 0; rep < runs; ++rep) {
                    auto r = run_task(task);
                    row.terms = r.terms;
                    row.work = r.inner_products_evaluated;
                    times.push_back(r.wall_time);
                }
            }
            row.time = median(times);
            rows.push_back(row);
            xs.push_back(t);
            yt.push_back(std::log2((double)std::max<uint64_t>(row.terms, 1)));
            yw.push_back(std::log2((double)std::max<uint64_t>(row.work, 1)));
            ytime.push_back(std::log2(std::max(row.time, 1e-9)));
        }
        double et = fit_slope(xs, yt), ew = fit_slope(xs, yw);
        json fit{{"policy", join_ints(policy, ' ')}, {"exponent_terms", et}, {"exponent_work", ew}};
        // informational only; timing noise keeps it out of any check
        if (o.timing) fit["exponent_time"] = fit_slope(xs, ytime);
        fits.push_back(fit);
    }
    csv << "mode,policy,t,blocks,reps,seed,terms,work,work_unit,exponent_terms,exponent_work";
    if (o.timing) csv << ",median_time_s,exponent_time";
    csv << "\n";
    const char* unit = o.mode == "gauss" ? "unique_gauss_sums" : "inner_products";
    for (auto& r : rows) {
        json fit;
        for (auto& f : fits)
            if (f["policy"] == r.policy) fit = f;
        csv << o.mode << "," << r.policy << "," << r.t << "," << r.blocks << "," << o.reps << "," << o.seed << ","
            << r.terms << "," << r.work << "," << unit << "," << fmt_double(fit["exponent_terms"].get<double>()) << ","
            << fmt_double(fit["exponent_work"].get<double>());
        if (o.timing) csv << "," << fmt_double(r.time) << "," << fmt_double(fit["exponent_time"].get<double>());
        csv << "\n";
    }
    return {{"mode", o.mode}, {"fits", fits}};
}

// ---------------------------------------------------------------- catalog

inline void cmd_catalog(int k, std::ostream& out) {
    write_decomposition(out, catalog_entry(k), catalog_note(k));
}

}  // namespace tsim::cli
