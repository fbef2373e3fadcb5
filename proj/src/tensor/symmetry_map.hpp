#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace qrst::detail {

/// Maps each dense offset of an order-d, dim-n cubical tensor to the slot of
/// its canonical (sorted) index tuple. Slots follow lexicographic order.
struct SymmetryMap {
  std::size_t order = 0;
  std::size_t dim = 0;
  std::vector<std::uint32_t> slot_of_offset;
  std::vector<std::size_t> canonical_offset;
  std::vector<std::size_t> multiplicity;

  std::size_t slots() const { return canonical_offset.size(); }
};

/// Shared, cached per (order, dim). Thread-safe.
std::shared_ptr<const SymmetryMap> symmetry_map(std::size_t order, std::size_t dim);

/// Decodes a flat offset into a 0-based index tuple (first index fastest).
void decode_offset(std::size_t offset, std::size_t dim, std::vector<std::size_t>& index);

}  // namespace qrst::detail
