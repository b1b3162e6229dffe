#include "hodgejet/jetcalc/series.hpp"

#include <map>
#include <mutex>
#include <numeric>

namespace hodgejet {

int index_weight(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

std::string index_string(const MultiIndex& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(a[i]);
  }
  return s;
}

MultiIndex parse_index(std::string_view text, std::size_t d) {
  MultiIndex a;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string part(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
    try {
      std::size_t used = 0;
      const int v = std::stoi(part, &used);
      if (used != part.size() || v < 0) throw std::invalid_argument(part);
      a.push_back(v);
    } catch (const std::exception&) {
      throw InputError("bad multi-index '" + std::string(text) + "'");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (a.size() != d) throw InputError("multi-index '" + std::string(text) + "' has wrong length");
  return a;
}

std::vector<MultiIndex> disk_basis(int d, int r) {
  if (d < 0 || r < 0) throw InputError("disk parameters must be non-negative");
  std::vector<MultiIndex> out;
  MultiIndex cur(static_cast<std::size_t>(d), 0);
  // Descending lex order inside each weight: fill earlier slots first.
  std::function<void(std::size_t, int)> rec = [&](std::size_t slot, int left) {
    if (slot + 1 >= cur.size()) {
      if (!cur.empty()) cur.back() = left;
      out.push_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[slot] = v;
      rec(slot + 1, left - v);
    }
    cur[slot] = 0;
  };
  for (int w = 0; w <= r; ++w) {
    if (d == 0) {
      if (w == 0) out.push_back({});
      continue;
    }
    rec(0, w);
  }
  return out;
}

std::size_t DiskAlgebra::flat(const MultiIndex& a) const {
  std::size_t f = 0, scale = 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || a[i] > r) return static_cast<std::size_t>(-1);
    f += static_cast<std::size_t>(a[i]) * scale;
    scale *= static_cast<std::size_t>(r + 1);
  }
  return f;
}

std::size_t DiskAlgebra::position(const MultiIndex& alpha) const {
  if (alpha.size() != static_cast<std::size_t>(d)) throw ShapeError("multi-index length mismatch");
  const std::size_t f = flat(alpha);
  if (f == static_cast<std::size_t>(-1) || index_weight(alpha) > r) return static_cast<std::size_t>(-1);
  return lookup_[f];
}

std::size_t DiskAlgebra::unit_index(int var) const {
  if (r < 1) throw InputError("order-zero disk has no linear part");
  MultiIndex e(static_cast<std::size_t>(d), 0);
  e.at(static_cast<std::size_t>(var)) = 1;
  return position(e);
}

std::shared_ptr<const DiskAlgebra> make_disk(int d, int r) {
  auto a = std::make_shared<DiskAlgebra>();
  a->d = d;
  a->r = r;
  a->basis = disk_basis(d, r);
  std::size_t cells = 1;
  for (int i = 0; i < d; ++i) cells *= static_cast<std::size_t>(r + 1);
  a->lookup_.assign(cells, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < a->basis.size(); ++i) a->lookup_[a->flat(a->basis[i])] = i;
  for (std::size_t i = 0; i < a->basis.size(); ++i) {
    for (std::size_t j = 0; j < a->basis.size(); ++j) {
      if (index_weight(a->basis[i]) + index_weight(a->basis[j]) > r) continue;
      MultiIndex s = a->basis[i];
      for (std::size_t k = 0; k < s.size(); ++k) s[k] += a->basis[j][k];
      a->products.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                             static_cast<std::uint32_t>(a->position(s))});
    }
  }
  return a;
}

std::shared_ptr<const DiskAlgebra> DiskAlgebra::get(int d, int r) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const DiskAlgebra>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{d, r}];
  if (!slot) slot = make_disk(d, r);
  return slot;
}

}  // namespace hodgejet
