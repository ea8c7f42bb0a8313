#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tsim/cli.hpp"

using namespace tsim::cli;

namespace {

// Writes to --out when given, otherwise stdout.
struct Sink {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit Sink(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw std::runtime_error("cannot write " + path);
        os = &file;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clifford+T strong simulation via stabilizer-rank and Gauss-sum decompositions"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "run oracle-equivalence checks");
    verify->add_option("scope", vo.scope,
                       "all | decompositions | merges | kernel | gauss-k1 | gauss-k2 | gauss-k3 | gauss-k6 | gauss-k12 | "
                       "census | strong-sim");
    verify->add_option("--samples", vo.samples, "random cases per size");
    verify->add_option("--seed", vo.seed);
    verify->add_option("--catalog-file", vo.catalog_file, "verify a decomposition file instead");
    std::string verify_out;
    verify->add_option("--out", verify_out);

    ExpectOptions eo;
    auto* expect = app.add_subcommand("expect", "expectation value of a Pauli or projector on |T>^t |0>^(n-t)");
    expect->add_option("--t", eo.t, "number of magic states")->required();
    expect->add_option("--n", eo.n, "total qubits (default: Pauli length)");
    expect->add_option("--pauli", eo.pauli, "Pauli string, comma-separated projector factors, or 'random'")->required();
    expect->add_option("--mode", eo.mode)->check(CLI::IsMember({"exact", "sampled", "gauss"}));
    expect->add_option("--policy", eo.policy, "allowed block sizes, e.g. 12,6,3,2,1");
    expect->add_option("--epsilon", eo.epsilon);
    expect->add_option("--pf", eo.p_f);
    expect->add_option("--samples", eo.samples, "override the sample count L");
    expect->add_option("--seed", eo.seed);
    expect->add_flag("--timing", eo.timing, "include wall time in the output");
    std::string expect_out;
    expect->add_option("--out", expect_out);

    CensusOptions co;
    auto* census = app.add_subcommand("census", "distribution of unique non-zero Gauss sums over Paulis");
    census->add_option("--k", co.k)->required()->check(CLI::IsMember({1, 2, 3, 6, 12}));
    census->add_option("--mode", co.mode)->check(CLI::IsMember({"exhaustive", "sampled"}));
    census->add_option("--samples", co.samples);
    census->add_option("--seed", co.seed);
    std::string census_out;
    census->add_option("--out", census_out, "CSV histogram path; the summary then goes to stdout");

    BenchOptions bo;
    std::string bench_ts = "6,12,18";
    auto* bench = app.add_subcommand("bench", "work counters and exponent fits");
    bench->add_option("--t", bench_ts, "comma-separated T counts");
    bench->add_option("--policy", bo.policies, "block policy, repeatable");
    bench->add_option("--mode", bo.mode)->check(CLI::IsMember({"exact", "sampled", "gauss"}));
    bench->add_option("--reps", bo.reps);
    bench->add_option("--seed", bo.seed);
    bench->add_option("--samples", bo.samples);
    bench->add_option("--epsilon", bo.epsilon);
    bench->add_option("--pf", bo.p_f);
    bench->add_option("--pauli", bo.pauli, "projector for exact/sampled (default identity)");
    bench->add_flag("--timing", bo.timing, "add median wall time column");
    std::string bench_out;
    bench->add_option("--out", bench_out, "CSV path; the fit summary then goes to stdout");

    int cat_k = 6;
    std::string cat_out;
    auto* cat = app.add_subcommand("catalog", "write a catalog decomposition in the text format");
    cat->add_option("--k", cat_k)->required()->check(CLI::IsMember({1, 2, 3, 6, 12}));
    cat->add_option("--out", cat_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*verify) {
            vo.threads = threads;
            Sink s(verify_out);
            return cmd_verify(vo, *s.os);
        }
        if (*expect) {
            eo.threads = threads;
            Sink s(expect_out);
            return cmd_expect(eo, *s.os);
        }
        if (*census) {
            co.threads = threads;
            Sink s(census_out);
            auto summary = cmd_census(co, *s.os);
            if (!census_out.empty()) std::cout << summary.dump(2) << "\n";
            return 0;
        }
        if (*bench) {
            bo.threads = threads;
            bo.ts = parse_int_list(bench_ts);
            if (bo.policies.empty()) bo.policies = {"6"};
            Sink s(bench_out);
            auto fits = cmd_bench(bo, *s.os);
            if (!bench_out.empty()) std::cout << fits.dump(2) << "\n";
            return 0;
        }
        if (*cat) {
            Sink s(cat_out);
            cmd_catalog(cat_k, *s.os);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
