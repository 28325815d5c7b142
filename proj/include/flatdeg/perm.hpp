#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flatdeg {

// Permutation of {0, ..., n-1}. Text forms are 1-based cycle notation.
//
// Products act on the right: (a * b)[x] == b[a[x]], i.e. apply a first.
class Perm {
 public:
  Perm() = default;
  explicit Perm(int n);
  explicit Perm(std::vector<int> images);

  static Perm identity(int n) { return Perm(n); }
  // Parses "(1 2 3)(4 5)" or "()" on {1..n}.
  static Perm from_cycles(int n, std::string_view text);
  // x -> x + shift (mod n).
  static Perm rotation(int n, int shift);

  int size() const { return static_cast<int>(images_.size()); }
  int operator[](int i) const { return images_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const { return images_; }

  Perm inverse() const;
  bool is_identity() const;
  bool is_involution() const;
  int fixed_points() const;

  // All cycles, fixed points included, each starting at its smallest element,
  // ordered by that element.
  std::vector<std::vector<int>> cycles() const;
  // Cycle lengths in nonincreasing order.
  std::vector<int> cycle_type() const;

  // Relabels by `labels`: the result maps labels[x] to labels[p[x]].
  Perm relabel(const Perm& labels) const;

  std::string to_string() const;

  friend Perm operator*(const Perm& a, const Perm& b);
  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm&, const Perm&) = default;

 private:
  std::vector<int> images_;
};

// Orbit index of every point under the group generated by `gens`.
std::vector<int> orbit_components(int n, std::span<const Perm> gens);
bool is_transitive(int n, std::span<const Perm> gens);

}  // namespace flatdeg
