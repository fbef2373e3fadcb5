#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qrst/hopm.hpp"
#include "qrst/pqrst.hpp"
#include "qrst/qrst.hpp"
#include "qrst/spectra.hpp"
#include "qrst/sym_tensor.hpp"

namespace qrst::io {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Tensor JSON: {"order", "dim", and exactly one of "unique_entries" or
/// "dense_values"}. Throws InputError naming the offending field.
SymTensor parse_tensor_json(std::string_view text);
SymTensor load_tensor(const std::filesystem::path& path);
std::string tensor_to_json(const SymTensor& t);
void save_tensor(const std::filesystem::path& path, const SymTensor& t);

/// Eigenpair table, CSV or JSON by file extension.
std::string eigenpairs_csv(const EigenSet& set, std::size_t dim);
std::string eigenpairs_json(const EigenSet& set, std::size_t dim);
void write_eigenpairs(const std::filesystem::path& path, const EigenSet& set, std::size_t dim);

/// slice,k,shift,epsilon,slice_lambda_min (1-based slice).
std::string qrst_trace_csv(std::span<const SliceOutcome> outcomes);
/// permutation,slice,k,shift,epsilon,slice_lambda_min.
std::string pqrst_trace_csv(std::span<const PermutationRun> runs);
/// run,k,alpha,lambda (1-based run).
std::string hopm_trace_csv(std::span<const HopmOutcome> runs);

/// 1-based, dash-separated ("2-1-3"); empty for no permutation.
std::string format_permutation(std::span<const std::size_t> perm);

std::string sha256_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace qrst::io
