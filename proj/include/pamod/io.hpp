#ifndef PAMOD_IO_HPP
#define PAMOD_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "pamod/generator.hpp"

namespace pamod {

/// Edge-list text format:
///
///     # pa-graph n=<n> h=<h> seed=<seed>
///     u v
///     ...
///
/// One `u v` line per edge in arrival order, loops written as `u u`.
void write_edge_list(std::ostream& out, const PAGraph& graph);

/// Parses the format above. Throws std::invalid_argument on a malformed
/// header, a malformed line, an out-of-range endpoint or an edge count other
/// than hn.
PAGraph read_edge_list(std::istream& in);

/// File variants; throw io_error when the file cannot be opened or written.
void save_edge_list(const std::filesystem::path& path, const PAGraph& graph);
PAGraph load_edge_list(const std::filesystem::path& path);

/// `# ghat M=<M> seed=<seed>` header followed by `i j` lines.
void write_ghat(std::ostream& out, const GHatGraph& graph, std::uint64_t seed);

/// Partition file: one `vertex community` line per vertex, vertices 1-based,
/// communities 0-based.
void write_partition(std::ostream& out, const std::vector<std::uint32_t>& labels);
std::vector<std::uint32_t> read_partition(std::istream& in, vertex_t n);

/// Writes `content` to `path` through a sibling temporary file and rename, so
/// a failed write never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace pamod

#endif  // PAMOD_IO_HPP
