#include "ktree/io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "ktree/error.hpp"

namespace ktree::io {

namespace {

// Appends to a string and hands it to the stream in large chunks; the edge
// list of a 10^7 vertex graph is a few hundred MB of text.
class ChunkedWriter {
public:
    explicit ChunkedWriter(std::ostream& out) : out_(out) { buffer_.reserve(kChunk + 64); }
    ~ChunkedWriter() { flush(); }

    void put(std::string_view s) {
        buffer_.append(s);
        maybe_flush();
    }
    void put(char c) { buffer_.push_back(c); }
    void put_uint(std::uint64_t x) {
        char tmp[24];
        auto [end, ec] = std::to_chars(tmp, tmp + sizeof tmp, x);
        buffer_.append(tmp, end);
        maybe_flush();
    }
    void flush() {
        if (!buffer_.empty()) {
            out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
            buffer_.clear();
        }
    }

private:
    static constexpr std::size_t kChunk = std::size_t{1} << 20;
    void maybe_flush() {
        if (buffer_.size() >= kChunk) flush();
    }

    std::ostream& out_;
    std::string buffer_;
};

[[noreturn]] void parse_fail(std::size_t line, const std::string& why) {
    throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": " + why);
}

template <class T>
bool parse_number(std::string_view token, T& value) {
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    return ec == std::errc() && ptr == token.data() + token.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

void parse_header(std::string_view line, std::size_t line_no, EdgeListHeader& header) {
    auto tokens = split_ws(line);
    if (tokens.size() < 2 || tokens[0] != "#" || tokens[1] != "ktree")
        parse_fail(line_no, "expected header '# ktree k=<k> n=<n> seed=<seed>'");
    bool have_k = false, have_n = false, have_seed = false;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
        auto eq = tokens[i].find('=');
        if (eq == std::string_view::npos) parse_fail(line_no, "malformed header field '" + std::string(tokens[i]) + "'");
        auto key = tokens[i].substr(0, eq);
        auto value = tokens[i].substr(eq + 1);
        bool ok = true;
        if (key == "k") ok = have_k = parse_number(value, header.k);
        else if (key == "n") ok = have_n = parse_number(value, header.n);
        else if (key == "seed") ok = have_seed = parse_number(value, header.seed);
        else if (key == "b") {
            double b = 0;
            std::istringstream ss{std::string(value)};
            ss.imbue(std::locale::classic());
            ok = static_cast<bool>(ss >> b) && ss.eof();
            header.b = b;
        }
        if (!ok) parse_fail(line_no, "bad value for header field '" + std::string(key) + "'");
    }
    if (!have_k || !have_n || !have_seed) parse_fail(line_no, "header must define k, n and seed");
}

} // namespace

void write_edge_list(std::ostream& out, const Graph& graph, const EdgeListHeader& header) {
    {
        ChunkedWriter w(out);
        w.put("# ktree k=");
        w.put_uint(header.k);
        w.put(" n=");
        w.put_uint(header.n);
        w.put(" seed=");
        w.put_uint(header.seed);
        if (header.b) {
            w.put(" b=");
            w.put(format_double(*header.b));
        }
        w.put('\n');
        graph.for_each_edge([&](Vertex u, Vertex v) {
            w.put_uint(u);
            w.put(' ');
            w.put_uint(v);
            w.put('\n');
        });
    }
    if (!out) throw Error(ErrorCode::io_error, "failed writing edge list");
}

EdgeListFile read_edge_list(std::istream& in) {
    EdgeListFile file;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<Edge> edges;
    Edge previous{0, 0};

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (!have_header) {
            parse_header(view, line_no, file.header);
            have_header = true;
            continue;
        }
        auto tokens = split_ws(view);
        if (tokens.empty()) continue;
        if (tokens[0].front() == '#') continue;
        Edge e;
        if (tokens.size() != 2 || !parse_number(tokens[0], e.first) || !parse_number(tokens[1], e.second))
            parse_fail(line_no, "expected 'u v' with non-negative integers, got '" + line + "'");
        if (e.first >= e.second) parse_fail(line_no, "edge must satisfy u < v");
        if (e.second >= file.header.n) parse_fail(line_no, "vertex " + std::to_string(e.second) + " >= n");
        if (!edges.empty() && !(previous < e)) parse_fail(line_no, "edges must be strictly ascending");
        previous = e;
        edges.push_back(e);
    }
    if (!have_header) parse_fail(1, "empty file");
    if (in.bad()) throw Error(ErrorCode::io_error, "read failure");
    file.graph = Graph::from_edges(file.header.n, edges);
    return file;
}

void write_pace_td(std::ostream& out, const TreeDecomposition& td) {
    {
        ChunkedWriter w(out);
        std::uint64_t widest = 0;
        for (std::size_t i = 0; i < td.bag_count(); ++i) widest = std::max<std::uint64_t>(widest, td.bag(i).size());
        w.put("s td ");
        w.put_uint(td.bag_count());
        w.put(' ');
        w.put_uint(widest);
        w.put(' ');
        w.put_uint(td.vertex_count);
        w.put('\n');
        for (std::size_t i = 0; i < td.bag_count(); ++i) {
            w.put("b ");
            w.put_uint(i + 1);
            for (Vertex v : td.bag(i)) {
                w.put(' ');
                w.put_uint(static_cast<std::uint64_t>(v) + 1);
            }
            w.put('\n');
        }
        for (auto [a, b] : td.tree_edges) {
            w.put_uint(static_cast<std::uint64_t>(a) + 1);
            w.put(' ');
            w.put_uint(static_cast<std::uint64_t>(b) + 1);
            w.put('\n');
        }
    }
    if (!out) throw Error(ErrorCode::io_error, "failed writing tree decomposition");
}

TreeDecomposition read_pace_td(std::istream& in) {
    TreeDecomposition td;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::uint64_t bags = 0, widest = 0;
    std::vector<std::vector<Vertex>> bag_lists;

    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = split_ws(line);
        if (tokens.empty() || tokens[0] == "c") continue;
        if (tokens[0] == "s") {
            if (have_header || tokens.size() != 5 || tokens[1] != "td" || !parse_number(tokens[2], bags) ||
                !parse_number(tokens[3], widest) || !parse_number(tokens[4], td.vertex_count))
                parse_fail(line_no, "expected 's td <bags> <max bag size> <vertices>'");
            have_header = true;
            bag_lists.assign(bags, {});
            continue;
        }
        if (!have_header) parse_fail(line_no, "solution line must come first");
        if (tokens[0] == "b") {
            std::uint64_t id = 0;
            if (tokens.size() < 2 || !parse_number(tokens[1], id) || id < 1 || id > bags)
                parse_fail(line_no, "bad bag id");
            auto& bag = bag_lists[id - 1];
            for (std::size_t i = 2; i < tokens.size(); ++i) {
                Vertex v = 0;
                if (!parse_number(tokens[i], v) || v < 1 || v > td.vertex_count)
                    parse_fail(line_no, "bad vertex '" + std::string(tokens[i]) + "'");
                bag.push_back(v - 1);
            }
            if (bag.size() > widest) parse_fail(line_no, "bag larger than declared maximum");
            continue;
        }
        std::uint32_t a = 0, b = 0;
        if (tokens.size() != 2 || !parse_number(tokens[0], a) || !parse_number(tokens[1], b) || a < 1 || b < 1 ||
            a > bags || b > bags)
            parse_fail(line_no, "expected tree edge '<i> <j>'");
        td.tree_edges.emplace_back(a - 1, b - 1);
    }
    if (!have_header) parse_fail(line_no, "missing 's td' line");
    for (const auto& bag : bag_lists) td.add_bag(bag);
    td.width = widest == 0 ? 0 : static_cast<std::uint32_t>(widest - 1);
    return td;
}

std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
    return std::string(buf, end);
}

std::string comment_line(const RunInfo& info) {
    return std::string("# ") + kToolName + " version=" + kToolVersion + " k=" + std::to_string(info.k) +
           " n=" + std::to_string(info.n) + " seed=" + std::to_string(info.seed) +
           " trials=" + std::to_string(info.trials);
}

nlohmann::json to_json(const RunInfo& info) {
    return {{"tool", kToolName}, {"version", kToolVersion}, {"k", info.k},
            {"n", info.n},       {"seed", info.seed},       {"trials", info.trials}};
}

void write_theory_csv(std::ostream& out, const theory::TheoreticalDistribution& dist,
                      const theory::ExpectedDegreeTable* expected) {
    out << "# " << kToolName << " version=" << kToolVersion << " k=" << dist.k;
    if (expected) out << " n=" << expected->n;
    out << " d_max=" << dist.d_max() << " gamma=" << format_double(dist.gamma) << '\n';
    out << "d,beta,closed_form" << (expected ? ",expected_dp" : "") << '\n';
    for (std::uint64_t d = dist.k; d <= dist.d_max(); ++d) {
        out << d << ',' << format_double(dist.at(d)) << ',' << format_double(theory::beta_closed_form(dist.k, d));
        if (expected) out << ',' << format_double(expected->at(d));
        out << '\n';
    }
    if (!out) throw Error(ErrorCode::io_error, "failed writing theory table");
}

nlohmann::json theory_json(const theory::TheoreticalDistribution& dist, const theory::ExpectedDegreeTable* expected) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::uint64_t d = dist.k; d <= dist.d_max(); ++d) {
        nlohmann::json row{{"d", d}, {"beta", dist.at(d)}, {"closed_form", theory::beta_closed_form(dist.k, d)}};
        if (expected) row["expected_dp"] = expected->at(d);
        rows.push_back(std::move(row));
    }
    nlohmann::json j{{"tool", kToolName},
                     {"version", kToolVersion},
                     {"k", dist.k},
                     {"n", expected ? nlohmann::json(expected->n) : nlohmann::json(nullptr)},
                     {"d_max", dist.d_max()},
                     {"gamma", dist.gamma},
                     {"rows", std::move(rows)}};
    if (expected) j["overflow"] = expected->overflow;
    return j;
}

void write_histogram_csv(std::ostream& out, const analysis::DegreeHistogram& hist, const RunInfo& info) {
    out << comment_line(info) << '\n' << "d,count,fraction\n";
    for (auto [d, c] : hist.counts) out << d << ',' << c << ',' << format_double(hist.fraction(d)) << '\n';
    if (!out) throw Error(ErrorCode::io_error, "failed writing histogram");
}

void write_deviation_csv(std::ostream& out, const analysis::DeviationReport& report, const RunInfo& info) {
    out << comment_line(info) << " max_abs_error=" << format_double(report.max_abs_error)
        << " total_variation=" << format_double(report.total_variation) << '\n';
    out << "d,empirical_fraction,beta,abs_error,rel_error\n";
    for (const auto& r : report.rows)
        out << r.d << ',' << format_double(r.empirical_fraction) << ',' << format_double(r.beta) << ','
            << format_double(r.abs_error) << ',' << format_double(r.rel_error) << '\n';
    if (!out) throw Error(ErrorCode::io_error, "failed writing deviation report");
}

nlohmann::json to_json(const analysis::ExponentFit& fit) {
    return {{"gamma_hat", fit.gamma_hat},         {"std_error", fit.std_error}, {"d_min", fit.d_min},
            {"tail_samples", fit.tail_samples},   {"method", fit.method},       {"ccdf_gamma", fit.ccdf_gamma}};
}

nlohmann::json to_json(const analysis::ConcentrationReport& r) {
    nlohmann::json j = to_json(RunInfo{r.k, r.n, r.seed, r.trials});
    j["d"] = r.d;
    j["mean"] = r.mean;
    j["sample_std"] = r.sample_std;
    j["expectation_source"] = r.expectation_source;
    j["expectation"] = r.expectation;
    j["max_abs_deviation"] = r.max_abs_deviation;
    j["azuma_lambda_at_1pct"] = r.azuma_lambda_at_1pct;
    j["violations"] = r.violations;
    return j;
}

} // namespace ktree::io
