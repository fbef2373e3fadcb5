#include "qrst/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include "json.hpp"
#include <sstream>
#include <stdexcept>

#include "qrst/error.hpp"

namespace qrst::io {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

namespace {

std::size_t read_size(const json& doc, const char* field) {
  if (!doc.contains(field)) throw InputError(std::string("missing field '") + field + "'");
  const json& v = doc.at(field);
  if (!v.is_number_integer() && !(v.is_number_float() && std::floor(v.get<double>()) == v.get<double>())) {
    throw InputError(std::string("field '") + field + "' must be an integer");
  }
  const double d = v.get<double>();
  if (d < 1) throw InputError(std::string("field '") + field + "' must be positive");
  return static_cast<std::size_t>(d);
}

std::vector<double> read_numbers(const json& doc, const char* field) {
  const json& v = doc.at(field);
  if (!v.is_array()) throw InputError(std::string("field '") + field + "' must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number()) {
      throw InputError(std::string("field '") + field + "' entry " + std::to_string(k + 1) + " is not a number");
    }
    const double d = v[k].get<double>();
    if (!std::isfinite(d)) {
      throw InputError(std::string("field '") + field + "' entry " + std::to_string(k + 1) + " is not finite");
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace

SymTensor parse_tensor_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("tensor file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("tensor file must hold a JSON object");
  const std::size_t order = read_size(doc, "order");
  const std::size_t dim = read_size(doc, "dim");
  const bool has_unique = doc.contains("unique_entries");
  const bool has_dense = doc.contains("dense_values");
  if (has_unique == has_dense) throw InputError("exactly one of 'unique_entries' or 'dense_values' is required");

  if (has_unique) {
    const std::vector<double> entries = read_numbers(doc, "unique_entries");
    const std::size_t expected = unique_entry_count(order, dim);
    if (entries.size() != expected) {
      throw InputError("field 'unique_entries' has " + std::to_string(entries.size()) + " values, expected " +
                       std::to_string(expected));
    }
    return SymTensor::from_unique_entries(order, dim, entries);
  }

  std::vector<double> values = read_numbers(doc, "dense_values");
  const std::vector<std::size_t> dims(order, dim);
  const std::size_t expected = checked_volume(dims);
  if (values.size() != expected) {
    throw InputError("field 'dense_values' has " + std::to_string(values.size()) + " values, expected " +
                     std::to_string(expected));
  }
  DenseTensor dense(dims, std::move(values));
  double scale = 0.0;
  for (double v : dense.values()) scale = std::max(scale, std::abs(v));
  if (max_asymmetry(dense) > 1e-12 * std::max(1.0, scale)) throw InputError("field 'dense_values' is not symmetric");
  return symmetrize(dense);
}

SymTensor load_tensor(const std::filesystem::path& path) { return parse_tensor_json(read_file(path)); }

std::string tensor_to_json(const SymTensor& t) {
  // Written by hand so every number uses the shortest round-trip form.
  std::string out = "{\n  \"order\": " + std::to_string(t.order()) + ",\n  \"dim\": " + std::to_string(t.dim()) +
                    ",\n  \"unique_entries\": [";
  const std::vector<double> entries = t.unique_entries();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k) out += ", ";
    out += format_double(entries[k]);
  }
  out += "]\n}\n";
  return out;
}

void save_tensor(const std::filesystem::path& path, const SymTensor& t) { write_file(path, tensor_to_json(t)); }

std::string format_permutation(std::span<const std::size_t> perm) {
  std::string out;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (k) out += '-';
    out += std::to_string(perm[k] + 1);
  }
  return out;
}

namespace {

std::string slice_text(const Provenance& p) { return p.slice ? std::to_string(*p.slice + 1) : std::string(); }

}  // namespace

std::string eigenpairs_csv(const EigenSet& set, std::size_t dim) {
  std::string out = "lambda";
  for (std::size_t j = 1; j <= dim; ++j) out += ",x_" + std::to_string(j);
  out += ",stability,residual,iterations,occurrences,solver,permutation,slice\n";
  for (std::size_t k = 0; k < set.pairs.size(); ++k) {
    const Eigenpair& p = set.pairs[k];
    out += format_double(p.lambda);
    for (Eigen::Index j = 0; j < p.x.size(); ++j) out += "," + format_double(p.x[j]);
    out += ",";
    out += stability_name(p.stability);
    out += "," + format_double(p.residual) + "," + std::to_string(p.provenance.iterations) + "," +
           std::to_string(set.occurrences[k]) + "," + p.provenance.solver + "," +
           format_permutation(p.provenance.permutation) + "," + slice_text(p.provenance) + "\n";
  }
  return out;
}

std::string eigenpairs_json(const EigenSet& set, std::size_t dim) {
  // Numbers go through format_double so the JSON matches the CSV digit for digit.
  std::string out = "[";
  for (std::size_t k = 0; k < set.pairs.size(); ++k) {
    const Eigenpair& p = set.pairs[k];
    out += k ? ",\n  {" : "\n  {";
    out += "\"lambda\": " + format_double(p.lambda);
    for (std::size_t j = 0; j < dim; ++j) {
      out += ", \"x_" + std::to_string(j + 1) + "\": " + format_double(p.x[static_cast<Eigen::Index>(j)]);
    }
    out += ", \"stability\": " + json(std::string(stability_name(p.stability))).dump();
    out += ", \"residual\": " + format_double(p.residual);
    out += ", \"iterations\": " + std::to_string(p.provenance.iterations);
    out += ", \"occurrences\": " + std::to_string(set.occurrences[k]);
    out += ", \"solver\": " + json(p.provenance.solver).dump();
    out += ", \"permutation\": " + json(format_permutation(p.provenance.permutation)).dump();
    out += ", \"slice\": " + (p.provenance.slice ? std::to_string(*p.provenance.slice + 1) : std::string("null"));
    out += "}";
  }
  out += set.pairs.empty() ? "]\n" : "\n]\n";
  return out;
}

void write_eigenpairs(const std::filesystem::path& path, const EigenSet& set, std::size_t dim) {
  write_file(path, path.extension() == ".json" ? eigenpairs_json(set, dim) : eigenpairs_csv(set, dim));
}

namespace {

void append_qrst_rows(std::string& out, const std::string& prefix, const SliceOutcome& o) {
  for (const QrstTraceRow& r : o.trace) {
    out += prefix + std::to_string(r.slice + 1) + "," + std::to_string(r.k) + "," + format_double(r.shift) + "," +
           format_double(r.epsilon) + "," + format_double(r.slice_lambda_min) + "\n";
  }
}

}  // namespace

std::string qrst_trace_csv(std::span<const SliceOutcome> outcomes) {
  std::string out = "slice,k,shift,epsilon,slice_lambda_min\n";
  for (const SliceOutcome& o : outcomes) append_qrst_rows(out, "", o);
  return out;
}

std::string pqrst_trace_csv(std::span<const PermutationRun> runs) {
  std::string out = "permutation,slice,k,shift,epsilon,slice_lambda_min\n";
  for (const PermutationRun& run : runs) {
    const std::string prefix = format_permutation(run.permutation) + ",";
    for (const SliceOutcome& o : run.outcomes) append_qrst_rows(out, prefix, o);
  }
  return out;
}

std::string hopm_trace_csv(std::span<const HopmOutcome> runs) {
  std::string out = "run,k,alpha,lambda\n";
  for (const HopmOutcome& o : runs) {
    for (const HopmTraceRow& r : o.trace) {
      out += std::to_string(r.run + 1) + "," + std::to_string(r.k) + "," + format_double(r.alpha) + "," +
             format_double(r.lambda) + "\n";
    }
  }
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 0xF];
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace qrst::io
