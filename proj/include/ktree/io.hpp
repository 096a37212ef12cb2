#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "ktree/analysis.hpp"
#include "ktree/generator.hpp"
#include "ktree/graph.hpp"
#include "ktree/theory.hpp"

namespace ktree::io {

inline constexpr const char* kToolName = "ktree-lab";
inline constexpr const char* kToolVersion = KTREE_LAB_VERSION;

/// Header of an edge list file: `# ktree k=<k> n=<n> seed=<seed>`, with an
/// optional trailing ` b=<b>` for partial k-trees.
struct EdgeListHeader {
    std::uint32_t k = 0;
    std::uint32_t n = 0;
    std::uint64_t seed = 0;
    std::optional<double> b;
};

struct EdgeListFile {
    EdgeListHeader header;
    Graph graph;
};

/// Header line, then one `u v` line per edge with u < v in ascending order.
void write_edge_list(std::ostream& out, const Graph& graph, const EdgeListHeader& header);

/// Parses the format written by write_edge_list. Throws parse-error naming
/// the offending line.
EdgeListFile read_edge_list(std::istream& in);

/// PACE 2017 `.td`: `s td <bags> <max bag size> <n>`, `b <id> <v...>` lines
/// (bag ids and vertices 1-indexed), then one `<i> <j>` line per tree edge.
void write_pace_td(std::ostream& out, const TreeDecomposition& td);
TreeDecomposition read_pace_td(std::istream& in);

/// Decimal text with 12 significant digits, independent of the C locale.
std::string format_double(double x);

/// Identity embedded in every report: k, n, seed, trials and tool version.
struct RunInfo {
    std::uint32_t k = 0;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    std::uint64_t trials = 1;
};

std::string comment_line(const RunInfo& info);
nlohmann::json to_json(const RunInfo& info);

/// Columns `d,beta,closed_form,expected_dp`; expected_dp only when a table is given.
void write_theory_csv(std::ostream& out, const theory::TheoreticalDistribution& dist,
                      const theory::ExpectedDegreeTable* expected);
nlohmann::json theory_json(const theory::TheoreticalDistribution& dist, const theory::ExpectedDegreeTable* expected);

/// Columns `d,count,fraction`.
void write_histogram_csv(std::ostream& out, const analysis::DegreeHistogram& hist, const RunInfo& info);

/// Columns `d,empirical_fraction,beta,abs_error,rel_error`.
void write_deviation_csv(std::ostream& out, const analysis::DeviationReport& report, const RunInfo& info);

nlohmann::json to_json(const analysis::ExponentFit& fit);
nlohmann::json to_json(const analysis::ConcentrationReport& report);

} // namespace ktree::io
