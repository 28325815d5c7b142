#include "flatdeg/perm.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "flatdeg/errors.hpp"

namespace flatdeg {

Perm::Perm(int n) : images_(static_cast<std::size_t>(n)) {
  std::iota(images_.begin(), images_.end(), 0);
}

Perm::Perm(std::vector<int> images) : images_(std::move(images)) {
  std::vector<char> seen(images_.size(), 0);
  for (int x : images_) {
    if (x < 0 || x >= size() || seen[static_cast<std::size_t>(x)])
      throw ParseError("not a permutation");
    seen[static_cast<std::size_t>(x)] = 1;
  }
}

Perm Perm::from_cycles(int n, std::string_view text) {
  if (n <= 0) throw ParseError("permutation degree must be positive");
  std::vector<int> img(static_cast<std::size_t>(n));
  std::iota(img.begin(), img.end(), 0);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  if (i == text.size()) throw ParseError("empty permutation text (use \"()\" for identity)");
  while (i < text.size()) {
    if (text[i] != '(') throw ParseError("expected '(' in cycle notation: " + std::string(text));
    ++i;
    std::vector<int> cycle;
    for (;;) {
      skip();
      if (i < text.size() && text[i] == ')') {
        ++i;
        break;
      }
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j == i) throw ParseError("bad token in cycle notation: " + std::string(text));
      int x = std::stoi(std::string(text.substr(i, j - i)));
      i = j;
      if (x < 1 || x > n) throw ParseError("point out of range in " + std::string(text));
      if (used[static_cast<std::size_t>(x - 1)]) throw ParseError("repeated point in " + std::string(text));
      used[static_cast<std::size_t>(x - 1)] = 1;
      cycle.push_back(x - 1);
    }
    for (std::size_t k = 0; k < cycle.size(); ++k)
      img[static_cast<std::size_t>(cycle[k])] = cycle[(k + 1) % cycle.size()];
    skip();
  }
  return Perm(std::move(img));
}

Perm Perm::rotation(int n, int shift) {
  std::vector<int> img(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) img[static_cast<std::size_t>(x)] = ((x + shift) % n + n) % n;
  return Perm(std::move(img));
}

Perm Perm::inverse() const {
  std::vector<int> inv(images_.size());
  for (int x = 0; x < size(); ++x) inv[static_cast<std::size_t>((*this)[x])] = x;
  Perm r;
  r.images_ = std::move(inv);
  return r;
}

bool Perm::is_identity() const {
  for (int x = 0; x < size(); ++x)
    if ((*this)[x] != x) return false;
  return true;
}

bool Perm::is_involution() const {
  for (int x = 0; x < size(); ++x)
    if ((*this)[(*this)[x]] != x) return false;
  return true;
}

int Perm::fixed_points() const {
  int c = 0;
  for (int x = 0; x < size(); ++x) c += (*this)[x] == x;
  return c;
}

std::vector<std::vector<int>> Perm::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(images_.size(), 0);
  for (int x = 0; x < size(); ++x) {
    if (seen[static_cast<std::size_t>(x)]) continue;
    std::vector<int> c;
    for (int y = x; !seen[static_cast<std::size_t>(y)]; y = (*this)[y]) {
      seen[static_cast<std::size_t>(y)] = 1;
      c.push_back(y);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<int> Perm::cycle_type() const {
  std::vector<int> t;
  for (const auto& c : cycles()) t.push_back(static_cast<int>(c.size()));
  std::sort(t.rbegin(), t.rend());
  return t;
}

Perm Perm::relabel(const Perm& labels) const {
  std::vector<int> img(images_.size());
  for (int x = 0; x < size(); ++x)
    img[static_cast<std::size_t>(labels[x])] = labels[(*this)[x]];
  Perm r;
  r.images_ = std::move(img);
  return r;
}

std::string Perm::to_string() const {
  std::ostringstream os;
  bool any = false;
  for (const auto& c : cycles()) {
    if (c.size() < 2) continue;
    any = true;
    os << '(';
    for (std::size_t k = 0; k < c.size(); ++k) os << (k ? " " : "") << c[k] + 1;
    os << ')';
  }
  if (!any) os << "()";
  return os.str();
}

Perm operator*(const Perm& a, const Perm& b) {
  if (a.size() != b.size()) throw InternalError("permutation degree mismatch");
  std::vector<int> img(static_cast<std::size_t>(a.size()));
  for (int x = 0; x < a.size(); ++x) img[static_cast<std::size_t>(x)] = b[a[x]];
  Perm r;
  r.images_ = std::move(img);
  return r;
}

std::vector<int> orbit_components(int n, std::span<const Perm> gens) {
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int next = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    comp[static_cast<std::size_t>(s)] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (const Perm& g : gens) {
        // Orbits of a finite group: forward images suffice.
        int y = g[x];
        if (comp[static_cast<std::size_t>(y)] < 0) {
          comp[static_cast<std::size_t>(y)] = next;
          stack.push_back(y);
        }
      }
    }
    ++next;
  }
  return comp;
}

bool is_transitive(int n, std::span<const Perm> gens) {
  auto comp = orbit_components(n, gens);
  return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

}  // namespace flatdeg
