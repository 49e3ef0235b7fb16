#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace simsr {

using Elem = std::uint32_t;

/// Union-find over 0..n-1 with path halving. Used to close relations under
/// compatibility with operations.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), blocks_(n) {
    std::iota(parent_.begin(), parent_.end(), Elem{0});
  }

  Elem find(Elem x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns true when two distinct blocks were merged.
  bool unite(Elem a, Elem b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    --blocks_;
    return true;
  }

  std::size_t block_count() const noexcept { return blocks_; }
  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<Elem> parent_;
  std::size_t blocks_;
};

/// An equivalence relation on 0..n-1 stored as canonical block ids: blocks are
/// numbered in order of their least element, so equal relations compare equal.
class Partition {
 public:
  Partition() = default;

  static Partition identity(std::size_t n) {
    Partition p;
    p.block_.resize(n);
    std::iota(p.block_.begin(), p.block_.end(), Elem{0});
    p.blocks_ = n;
    return p;
  }

  static Partition total(std::size_t n) {
    Partition p;
    p.block_.assign(n, 0);
    p.blocks_ = n == 0 ? 0 : 1;
    return p;
  }

  /// Canonicalizes an arbitrary labelling (equal labels = same block).
  template <class Labels>
  static Partition from_labels(const Labels& labels) {
    Partition p;
    const std::size_t n = labels.size();
    p.block_.resize(n);
    std::vector<std::pair<std::size_t, Elem>> seen;
    Elem next = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Elem id = next;
      for (auto& [lab, b] : seen) {
        if (lab == static_cast<std::size_t>(labels[i])) {
          id = b;
          break;
        }
      }
      if (id == next) {
        seen.emplace_back(static_cast<std::size_t>(labels[i]), next);
        ++next;
      }
      p.block_[i] = id;
    }
    p.blocks_ = next;
    return p;
  }

  static Partition from_union_find(UnionFind& uf) {
    std::vector<Elem> roots(uf.size());
    for (Elem i = 0; i < roots.size(); ++i) roots[i] = uf.find(i);
    // roots are least elements of their block, so relabel in order of first appearance
    Partition p;
    p.block_.resize(roots.size());
    std::vector<Elem> id(roots.size(), static_cast<Elem>(-1));
    Elem next = 0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (id[roots[i]] == static_cast<Elem>(-1)) id[roots[i]] = next++;
      p.block_[i] = id[roots[i]];
    }
    p.blocks_ = next;
    return p;
  }

  std::size_t size() const noexcept { return block_.size(); }
  std::size_t block_count() const noexcept { return blocks_; }
  Elem block_of(Elem x) const { return block_[x]; }
  const std::vector<Elem>& blocks() const noexcept { return block_; }

  bool same(Elem x, Elem y) const { return block_[x] == block_[y]; }
  bool is_identity() const noexcept { return blocks_ == block_.size(); }
  bool is_total() const noexcept { return blocks_ <= 1; }

  /// True when every block of *this lies inside a block of o.
  bool refines(const Partition& o) const {
    for (std::size_t i = 0; i < block_.size(); ++i)
      for (std::size_t j = i + 1; j < block_.size(); ++j)
        if (block_[i] == block_[j] && o.block_[i] != o.block_[j]) return false;
    return true;
  }

  /// Members of each block, blocks in canonical order.
  std::vector<std::vector<Elem>> classes() const {
    std::vector<std::vector<Elem>> out(blocks_);
    for (Elem i = 0; i < block_.size(); ++i) out[block_[i]].push_back(i);
    return out;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition& a, const Partition& b) { return a.block_ <=> b.block_; }

 private:
  std::vector<Elem> block_;
  std::size_t blocks_ = 0;
};

}  // namespace simsr
