// One line per acceptance criterion; exit status is non-zero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "tsim/cli.hpp"

using namespace tsim;
using namespace tsim::cli;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok;
    std::string detail;
};

int failures = 0;

void run(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
    auto start = Clock::now();
    Outcome o{false, ""};
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    bool ok = o.ok && secs < budget_s;
    if (o.ok && !ok) o.detail += " (over time budget)";
    failures += !ok;
    std::printf("%s %d %s: %s [%.2fs / %.0fs]\n", ok ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs,
                budget_s);
    std::fflush(stdout);
}

std::string str_of(const std::function<void(std::ostream&)>& f) {
    std::ostringstream os;
    f(os);
    return os.str();
}

}  // namespace

int main() {
    const int N = 4;

    run(1, "catalog exactness", 10, [] {
        std::string d;
        bool ok = true;
        for (auto [k, n] : std::vector<std::pair<int, int>>{{1, 2}, {2, 2}, {3, 3}, {6, 7}, {12, 47}}) {
            auto c = verify_decomposition(catalog_entry(k), "", n);
            ok = ok && c.failures == 0;
            d += "k" + std::to_string(k) + "=" + std::to_string(catalog_entry(k).size()) + " ";
        }
        return Outcome{ok, d};
    });

    run(2, "bell merges", 5, [] {
        auto cs = verify_merges();
        bool ok = cs.size() == 2;
        std::string d;
        for (auto& c : cs) {
            ok = ok && c.failures == 0 && c.cases == 4096;
            d += c.name + " " + std::to_string(c.cases - c.failures) + "/" + std::to_string(c.cases) + " ";
        }
        return Outcome{ok, d};
    });

    run(3, "kernel vs dense", 60, [&] {
        uint64_t bad = 0, total = 0;
        for (int n = 2; n <= 8; ++n) {
            auto c = verify_kernel(n, 1000, 2024, N);
            bad += c.failures;
            total += c.cases;
        }
        return Outcome{bad == 0 && total == 7000, std::to_string(total - bad) + "/" + std::to_string(total) + " pairs"};
    });

    run(4, "gauss sums vs dense", 600, [&] {
        uint64_t bad = 0;
        std::string d;
        for (int k : {1, 2, 3, 6, 12}) {
            auto c = verify_gauss(k, 100000, 2024, N);
            bad += c.failures;
            d += "k" + std::to_string(k) + ":" + std::to_string(c.cases) + " ";
        }
        return Outcome{bad == 0, d + "failures=" + std::to_string(bad)};
    });

    run(5, "rank census", 600, [&] {
        std::vector<int> got;
        for (int k : {1, 2, 3, 6}) got.push_back(rank_census(k, 0, 0, N).max_count);
        auto c12 = rank_census(12, 100000, 7, N);
        bool ok = got == std::vector<int>{2, 2, 3, 7} && c12.max_count == 42 && c12.evaluated == 100000;
        std::string d;
        for (int g : got) d += std::to_string(g) + " ";
        return Outcome{ok, d + std::to_string(c12.max_count) + " (worst " + c12.worst.to_string() + ")"};
    });

    run(6, "scaling exponents", 600, [&] {
        struct Want {
            int k;
            double e;
        };
        bool ok = true;
        std::string d;
        for (auto [k, e] : {Want{1, 1.0}, Want{2, 0.5}, Want{6, std::log2(7.0) / 6}, Want{12, std::log2(42.0) / 12}}) {
            BenchOptions o;
            o.ts = {k, 2 * k, 3 * k};
            o.policies = {std::to_string(k)};
            o.threads = N;
            std::ostringstream sink;
            double got = cmd_bench(o, sink)["fits"][0]["exponent_terms"].get<double>();
            ok = ok && std::abs(got - e) < 1e-3;
            char buf[64];
            std::snprintf(buf, sizeof buf, "k%d=%.4f ", k, got);
            d += buf;
        }
        auto c12 = BlockedDecomposition(12, 12, {12}).size(), c66 = BlockedDecomposition(12, 12, {6}).size();
        ok = ok && c12 == 47 && c66 == 49;
        double e47 = std::log2(double(c12)) / 12;
        ok = ok && std::abs(e47 - 0.4629) < 1e-3;
        char buf[96];
        std::snprintf(buf, sizeof buf, "chi12=%zu chi6+6=%zu log2(chi12)/12=%.4f", (size_t)c12, (size_t)c66, e47);
        return Outcome{ok, d + buf};
    });

    run(7, "sampled estimator calibration", 300, [&] {
        bool ok = true;
        std::string d;
        for (int t : {2, 6}) {
            auto rng = item_rng(777, t);
            PauliOperator P;
            do P = random_pauli(t, rng);
            while (P.x_mask().is_zero() && P.z_mask().is_zero());
            PauliProjector pr(t, {{P, 1}});
            auto dec = block_decomposition(t);
            double exact = exact_expectation(dec, pr).value;
            const int R = 500;
            std::vector<double> vals(R);
            parallel_for(R, N, [&](size_t r) { vals[r] = sampled_expectation(dec, pr, 100, 90000 + r).value; });
            double sum = 0, sq = 0;
            int within = 0;
            for (double v : vals) {
                sum += v;
                sq += v * v;
                within += std::abs(v - exact) <= 0.1 * std::abs(exact);
            }
            double mean = sum / R, se = std::sqrt((sq / R - mean * mean) / (R - 1));
            double frac = double(within) / R;
            bool pass = std::abs(mean - exact) <= 3 * se && frac >= 0.6;
            ok = ok && pass;
            char buf[160];
            std::snprintf(buf, sizeof buf, "t%d %s exact=%.4f mean=%.4f se=%.4f within10%%=%.2f ", t,
                          P.to_string().c_str(), exact, mean, se, frac);
            d += buf;
        }
        return Outcome{ok, d};
    });

    run(8, "determinism across threads", 600, [&] {
        std::vector<std::pair<std::string, std::function<std::string(int)>>> cmds;
        cmds.push_back({"verify", [](int th) {
                            VerifyOptions o;
                            o.scope = "kernel";
                            o.samples = 50;
                            o.threads = th;
                            return str_of([&](std::ostream& os) { cmd_verify(o, os); });
                        }});
        for (std::string mode : {"gauss", "exact", "sampled"})
            cmds.push_back({"expect-" + mode, [mode](int th) {
                                ExpectOptions o;
                                o.t = 12;
                                o.pauli = "random";
                                o.seed = 7;
                                o.mode = mode;
                                o.samples = 200;
                                o.threads = th;
                                return str_of([&](std::ostream& os) { cmd_expect(o, os); });
                            }});
        cmds.push_back({"census", [](int th) {
                            CensusOptions o;
                            o.k = 12;
                            o.mode = "sampled";
                            o.samples = 5000;
                            o.seed = 3;
                            o.threads = th;
                            std::ostringstream os;
                            auto s = cmd_census(o, os);
                            return os.str() + s.dump();
                        }});
        for (std::string mode : {"gauss", "sampled"})
            cmds.push_back({"bench-" + mode, [mode](int th) {
                                BenchOptions o;
                                o.mode = mode;
                                o.ts = {6, 12};
                                o.policies = {"6", "12,6"};
                                o.samples = 30;
                                o.seed = 11;
                                o.threads = th;
                                std::ostringstream os;
                                auto s = cmd_bench(o, os);
                                return os.str() + s.dump();
                            }});
        cmds.push_back({"catalog", [](int) { return str_of([](std::ostream& os) { cmd_catalog(12, os); }); }});
        bool ok = true;
        std::string bad;
        for (auto& [name, f] : cmds) {
            auto a = f(1), b = f(N), c = f(1), e = f(N);
            if (!(a == b && b == c && c == e) || a.empty()) {
                ok = false;
                bad += name + " ";
            }
        }
        return Outcome{ok, std::to_string(cmds.size()) + " commands compared" + (ok ? "" : ", differing: " + bad)};
    });

    return failures == 0 ? 0 : 1;
}
