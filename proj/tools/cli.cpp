#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ktree/analysis.hpp"
#include "ktree/error.hpp"
#include "ktree/experiment.hpp"
#include "ktree/generator.hpp"
#include "ktree/io.hpp"
#include "ktree/theory.hpp"

namespace ktree::cli {

namespace {

struct RunConfig {
    std::uint32_t k = 2;
    std::uint32_t n = 0;
    std::uint64_t seed = 0;
    std::uint64_t trials = 1;
    std::uint64_t d_max = 0;
    std::uint32_t d_min = analysis::kDefaultDMin;
    std::uint32_t d_cut = 0;
    std::optional<std::uint32_t> d;
    std::optional<double> partial_b;
    unsigned threads = 0;
    std::size_t memory_budget_mb = kDefaultMemoryBudget >> 20;
    std::string out;
    std::string td_out;
    std::string input;
    std::string td_input;
    std::string out_prefix;
    std::string format = "csv";
};

class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Opens `path` for writing, or hands back `fallback` when path is empty or "-".
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
            if (!*file_) throw Error(ErrorCode::io_error, "cannot open '" + path + "' for writing");
            stream_ = file_.get();
        }
    }
    std::ostream& get() { return *stream_; }
    void close() {
        stream_->flush();
        if (!*stream_) throw Error(ErrorCode::io_error, "write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
    return in;
}

ProcessParams process_params(const RunConfig& c) {
    ProcessParams p{c.k, c.n, c.seed};
    validate(p);
    return p;
}

int cmd_generate(const RunConfig& c, std::ostream& out) {
    const ProcessParams params = process_params(c);
    if (c.partial_b) retained_out_degree(c.k, *c.partial_b);
    const std::size_t budget = c.memory_budget_mb << 20;

    const KTree tree = generate(params, budget);
    const Graph graph = c.partial_b ? generate_partial(params, *c.partial_b, budget) : tree.adjacency();
    if (!c.partial_b && graph.edge_count() != tree.edge_count())
        throw InvariantViolation("edge count " + std::to_string(graph.edge_count()) + " != " +
                                 std::to_string(tree.edge_count()));

    Output edges(c.out, out);
    io::write_edge_list(edges.get(), graph, {c.k, c.n, c.seed, c.partial_b});
    edges.close();

    if (!c.td_out.empty()) {
        Output td(c.td_out, out);
        io::write_pace_td(td.get(), build_tree_decomposition(tree));
        td.close();
    }
    return kSuccess;
}

int cmd_theory(const RunConfig& c, std::ostream& out) {
    if (c.k < 2) throw Error(ErrorCode::invalid_params, "k must be at least 2, got " + std::to_string(c.k));
    if (c.format != "csv" && c.format != "json")
        throw Error(ErrorCode::invalid_params, "format must be csv or json");
    std::uint64_t d_max = c.d_max;
    if (d_max == 0) d_max = c.n ? theory::default_d_max(c.k, c.n) : 100;

    const auto dist = theory::beta_table(c.k, d_max);
    std::optional<theory::ExpectedDegreeTable> expected;
    if (c.n) expected = theory::expected_histogram_dp(c.k, c.n, d_max);
    const theory::ExpectedDegreeTable* table = expected ? &*expected : nullptr;

    Output o(c.out, out);
    if (c.format == "json")
        o.get() << io::theory_json(dist, table).dump(2) << '\n';
    else
        io::write_theory_csv(o.get(), dist, table);
    o.close();
    return kSuccess;
}

int cmd_analyze(const RunConfig& c, std::ostream& out) {
    analysis::DegreeHistogram hist;
    io::RunInfo info;
    nlohmann::json lemma = nullptr;

    if (!c.input.empty()) {
        auto in = open_input(c.input);
        const auto file = io::read_edge_list(in);
        if (file.header.k < 2) throw Error(ErrorCode::invalid_params, "input header has k < 2");
        hist = analysis::degree_histogram(file.graph, file.header.k);
        info = {file.header.k, file.header.n, file.header.seed, 1};
    } else {
        const ProcessParams params = process_params(c);
        if (c.trials < 1) throw Error(ErrorCode::invalid_params, "trials must be at least 1");
        if (c.trials == 1) {
            const KTree tree = generate(params, c.memory_budget_mb << 20);
            if (tree.vertex_count() >= tree.k() + 2) {
                const auto report = analysis::verify_lemma1(tree);
                if (!report.passed()) throw InvariantViolation("structural check failed: " + report.witness);
                lemma = "pass";
            }
            hist = analysis::degree_histogram(tree);
        } else {
            hist = experiment::aggregate(experiment::run_histograms(params, c.trials, c.threads));
        }
        info = {c.k, c.n, c.seed, c.trials};
    }

    const std::uint32_t d_cut = c.d_cut ? c.d_cut : std::max<std::uint32_t>(hist.k + 20, 30);
    const auto dist = theory::beta_table(hist.k, std::max<std::uint64_t>(d_cut, hist.max_degree()));
    const auto deviation = analysis::deviation_report(hist, dist, d_cut);

    nlohmann::json summary = io::to_json(info);
    summary["lemma1"] = lemma;
    summary["gamma_theory"] = dist.gamma;
    summary["max_abs_error"] = deviation.max_abs_error;
    summary["total_variation"] = deviation.total_variation;
    try {
        summary["fit"] = io::to_json(analysis::fit_tail_exponent(hist, c.d_min));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::insufficient_tail) throw;
        summary["fit"] = nullptr;
        summary["fit_error"] = e.what();
    }

    if (c.out_prefix.empty()) {
        io::write_histogram_csv(out, hist, info);
        return kSuccess;
    }
    Output h(c.out_prefix + ".hist.csv", out);
    io::write_histogram_csv(h.get(), hist, info);
    h.close();
    Output dev(c.out_prefix + ".deviation.csv", out);
    io::write_deviation_csv(dev.get(), deviation, info);
    dev.close();
    Output fit(c.out_prefix + ".fit.json", out);
    fit.get() << summary.dump(2) << '\n';
    fit.close();
    return kSuccess;
}

int cmd_concentration(const RunConfig& c, std::ostream& out) {
    process_params(c);
    if (c.trials < 2) throw Error(ErrorCode::invalid_params, "concentration needs --trials >= 2");
    const std::uint32_t d = c.d.value_or(c.k);
    const auto report = experiment::concentration_experiment(c.k, c.n, d, c.trials, c.seed, c.threads);
    Output o(c.out, out);
    o.get() << io::to_json(report).dump(2) << '\n';
    o.close();
    return kSuccess;
}

int cmd_validate_td(const RunConfig& c, std::ostream& out) {
    auto edges_in = open_input(c.input);
    const auto file = io::read_edge_list(edges_in);
    auto td_in = open_input(c.td_input);
    const auto td = io::read_pace_td(td_in);
    const auto check = analysis::validate_tree_decomposition(file.graph, td);

    nlohmann::json j{{"valid", check.valid()},
                     {"is_tree", check.is_tree},
                     {"covers_vertices", check.covers_vertices},
                     {"covers_edges", check.covers_edges},
                     {"running_intersection", check.running_intersection},
                     {"width", check.width}};
    if (!check.witness.empty()) j["witness"] = check.witness;
    out << j.dump(2) << '\n';
    return check.valid() ? kSuccess : kInvariant;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::io_error:
    case ErrorCode::parse_error: return kIo;
    default: return kUsage;
    }
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    c.threads = experiment::default_threads();

    CLI::App app{"Random k-tree laboratory: generation, theory tables and experiments", "ktree-lab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(io::kToolVersion));

    auto add_process = [&](CLI::App* sub, bool n_required) {
        sub->add_option("--k", c.k, "clique size k (>= 2)")->required();
        auto* n = sub->add_option("--n", c.n, "number of vertices (>= k+1)");
        if (n_required) n->required();
        sub->add_option("--seed", c.seed, "PRNG seed")->capture_default_str();
    };

    auto* gen = app.add_subcommand("generate", "generate a random k-tree and write its edge list");
    add_process(gen, true);
    gen->add_option("--out", c.out, "edge list path (default: stdout)");
    gen->add_option("--td", c.td_out, "also write a PACE tree decomposition to this path");
    gen->add_option("--partial-b", c.partial_b, "keep round(b*k) attachment edges per vertex, b in (0,1]");
    gen->add_option("--memory-budget-mb", c.memory_budget_mb, "refuse runs needing more memory")
        ->capture_default_str();

    auto* th = app.add_subcommand("theory", "emit beta_d, its closed form and (with --n) the exact expectations");
    th->add_option("--k", c.k, "clique size k (>= 2)")->required();
    th->add_option("--dmax", c.d_max, "largest degree in the table (default 100, or derived from --n)");
    th->add_option("--n", c.n, "also run the expected-degree recurrence up to n vertices");
    th->add_option("--format", c.format, "csv or json")->capture_default_str();
    th->add_option("--out", c.out, "output path (default: stdout)");

    auto* an = app.add_subcommand("analyze", "degree histogram, deviation from beta_d and tail-exponent fit");
    an->add_option("--k", c.k, "clique size k (>= 2)");
    an->add_option("--n", c.n, "number of vertices");
    an->add_option("--seed", c.seed, "PRNG seed")->capture_default_str();
    an->add_option("--trials", c.trials, "independent graphs to aggregate")->capture_default_str();
    an->add_option("--input", c.input, "analyse an edge list file instead of generating");
    an->add_option("--dmin", c.d_min, "smallest degree in the tail fit")->capture_default_str();
    an->add_option("--dcut", c.d_cut, "largest degree in the deviation report (default max(k+20, 30))");
    an->add_option("--out-prefix", c.out_prefix,
                   "write <prefix>.hist.csv, <prefix>.deviation.csv and <prefix>.fit.json "
                   "(default: histogram CSV on stdout)");
    an->add_option("--threads", c.threads, "worker threads for multi-trial runs");

    auto* co = app.add_subcommand("concentration", "spread of X_d(n) over independent trials vs the Azuma bound");
    add_process(co, true);
    co->add_option("--d", c.d, "degree to track (default: k)");
    co->add_option("--trials", c.trials, "number of trials (>= 2)")->required();
    co->add_option("--threads", c.threads, "worker threads");
    co->add_option("--out", c.out, "JSON output path (default: stdout)");

    auto* vt = app.add_subcommand("validate-td", "check a PACE tree decomposition against an edge list");
    vt->add_option("--input", c.input, "edge list")->required();
    vt->add_option("--td", c.td_input, "PACE .td file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForVersion&) {
        out << io::kToolVersion << '\n';
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        if (auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front()) err << sub->help();
        return kUsage;
    }

    try {
        if (an->parsed() && c.input.empty() && c.n == 0)
            throw Error(ErrorCode::invalid_params, "analyze needs --input or --k/--n");
        if (gen->parsed()) return cmd_generate(c, out);
        if (th->parsed()) return cmd_theory(c, out);
        if (an->parsed()) return cmd_analyze(c, out);
        if (co->parsed()) return cmd_concentration(c, out);
        if (vt->parsed()) return cmd_validate_td(c, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const InvariantViolation& e) {
        err << "internal invariant violated: " << e.what() << '\n';
        return kInvariant;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInvariant;
    }
    return kUsage;
}

} // namespace ktree::cli
