#include "symmetry_map.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>
#include <utility>

#include "qrst/dense_tensor.hpp"

namespace qrst::detail {

void decode_offset(std::size_t offset, std::size_t dim, std::vector<std::size_t>& index) {
  for (auto& i : index) {
    i = offset % dim;
    offset /= dim;
  }
}

namespace {

std::size_t encode(const std::vector<std::size_t>& index, std::size_t dim) {
  std::size_t offset = 0;
  for (std::size_t k = index.size(); k-- > 0;) offset = offset * dim + index[k];
  return offset;
}

std::shared_ptr<const SymmetryMap> build(std::size_t order, std::size_t dim) {
  const std::vector<std::size_t> dims(order, dim);
  const std::size_t volume = checked_volume(dims);

  auto map = std::make_shared<SymmetryMap>();
  map->order = order;
  map->dim = dim;

  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> slot_of_canonical(volume, kUnset);

  // Nondecreasing tuples in lexicographic order.
  std::vector<std::size_t> tuple(order, 0);
  while (true) {
    const std::size_t off = encode(tuple, dim);
    slot_of_canonical[off] = static_cast<std::uint32_t>(map->canonical_offset.size());
    map->canonical_offset.push_back(off);

    std::size_t p = order;
    while (p > 0 && tuple[p - 1] == dim - 1) --p;
    if (p == 0) break;
    const std::size_t next = tuple[p - 1] + 1;
    std::fill(tuple.begin() + static_cast<std::ptrdiff_t>(p - 1), tuple.end(), next);
  }

  map->slot_of_offset.resize(volume);
  map->multiplicity.assign(map->canonical_offset.size(), 0);
  std::vector<std::size_t> index(order);
  for (std::size_t off = 0; off < volume; ++off) {
    decode_offset(off, dim, index);
    std::sort(index.begin(), index.end());
    const std::uint32_t slot = slot_of_canonical[encode(index, dim)];
    map->slot_of_offset[off] = slot;
    ++map->multiplicity[slot];
  }
  return map;
}

}  // namespace

std::shared_ptr<const SymmetryMap> symmetry_map(std::size_t order, std::size_t dim) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const SymmetryMap>> cache;

  const std::lock_guard lock(mutex);
  auto& entry = cache[{order, dim}];
  if (!entry) entry = build(order, dim);
  return entry;
}

}  // namespace qrst::detail
