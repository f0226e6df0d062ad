#include "pamod/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pamod/errors.hpp"

namespace pamod {

namespace {

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("malformed " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::string_view header_field(std::string_view token, std::string_view key) {
  if (token.size() <= key.size() + 1 || token.substr(0, key.size()) != key ||
      token[key.size()] != '=') {
    throw std::invalid_argument("expected header field '" + std::string(key) + "=...'");
  }
  return token.substr(key.size() + 1);
}

}  // namespace

void write_edge_list(std::ostream& out, const PAGraph& graph) {
  out << "# pa-graph n=" << graph.n() << " h=" << graph.h << " seed=" << graph.seed << '\n';
  for (const Edge& e : graph.graph.edges()) out << e.u << ' ' << e.v << '\n';
}

PAGraph read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty edge-list input");
  std::istringstream header(line);
  std::string hash, tag, n_tok, h_tok, seed_tok, extra;
  header >> hash >> tag >> n_tok >> h_tok >> seed_tok;
  if (hash != "#" || tag != "pa-graph" || seed_tok.empty() || (header >> extra)) {
    throw std::invalid_argument("expected header '# pa-graph n=<n> h=<h> seed=<seed>'");
  }
  const auto n = parse_number<vertex_t>(header_field(n_tok, "n"), "n");
  const auto h = parse_number<std::uint32_t>(header_field(h_tok, "h"), "h");
  const auto seed = parse_number<std::uint64_t>(header_field(seed_tok, "seed"), "seed");
  if (n == 0 || h == 0) throw std::invalid_argument("n and h must be positive");

  std::vector<Edge> edges;
  edges.reserve(std::uint64_t{n} * h);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto space = line.find(' ');
    if (space == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'u v'");
    }
    const std::string_view view(line);
    edges.push_back({parse_number<vertex_t>(view.substr(0, space), "vertex id"),
                     parse_number<vertex_t>(view.substr(space + 1), "vertex id")});
  }
  if (edges.size() != std::uint64_t{n} * h) {
    throw std::invalid_argument("edge count " + std::to_string(edges.size()) + " != hn = " +
                                std::to_string(std::uint64_t{n} * h));
  }
  return PAGraph{Multigraph(n, std::move(edges)), h, seed};
}

void save_edge_list(const std::filesystem::path& path, const PAGraph& graph) {
  std::ostringstream out;
  write_edge_list(out, graph);
  write_file_atomic(path, out.str());
}

PAGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  return read_edge_list(in);
}

void write_ghat(std::ostream& out, const GHatGraph& graph, std::uint64_t seed) {
  out << "# ghat M=" << graph.M << " seed=" << seed << '\n';
  for (const Edge& e : graph.edges) out << e.u << ' ' << e.v << '\n';
}

void write_partition(std::ostream& out, const std::vector<std::uint32_t>& labels) {
  for (std::size_t v = 0; v < labels.size(); ++v) out << v + 1 << ' ' << labels[v] << '\n';
}

std::vector<std::uint32_t> read_partition(std::istream& in, vertex_t n) {
  std::vector<std::uint32_t> labels(n, 0);
  std::vector<bool> seen(n, false);
  std::uint64_t v = 0;
  std::uint32_t label = 0;
  while (in >> v >> label) {
    if (v < 1 || v > n) throw std::invalid_argument("partition vertex out of range");
    if (seen[v - 1]) throw std::invalid_argument("vertex listed twice in partition");
    seen[v - 1] = true;
    labels[v - 1] = label;
  }
  if (!in.eof()) throw std::invalid_argument("malformed partition line");
  for (bool s : seen) {
    if (!s) throw std::invalid_argument("partition does not cover every vertex");
  }
  return labels;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw io_error("failed writing " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw io_error("cannot move output into place: " + path.string());
  }
}

}  // namespace pamod
