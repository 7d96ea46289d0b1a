#include "modalpd/kripke.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "modalpd/solver.hpp"

namespace modalpd {

Frame::Frame(int worlds) : size_(worlds), relation_(static_cast<std::size_t>(worlds) * worlds, false) {
  if (worlds < 0) throw std::invalid_argument("negative frame size");
}

void Frame::add_edge(int from, int to) {
  if (from < 0 || to < 0 || from >= size_ || to >= size_) throw std::out_of_range("world out of range");
  relation_[from * size_ + to] = true;
}

bool Frame::is_transitive() const {
  for (int a = 0; a < size_; ++a)
    for (int b = 0; b < size_; ++b)
      if (sees(a, b))
        for (int c = 0; c < size_; ++c)
          if (sees(b, c) && !sees(a, c)) return false;
  return true;
}

bool Frame::is_irreflexive() const {
  for (int a = 0; a < size_; ++a)
    if (sees(a, a)) return false;
  return true;
}

void Frame::close_transitively() {
  for (int k = 0; k < size_; ++k)
    for (int a = 0; a < size_; ++a)
      if (sees(a, k))
        for (int b = 0; b < size_; ++b)
          if (sees(k, b)) relation_[a * size_ + b] = true;
}

std::vector<int> Frame::heights() const {
  std::vector<int> height(size_, -1);
  std::vector<char> active(size_, 0);
  std::function<int(int)> visit = [&](int w) -> int {
    if (height[w] >= 0) return height[w];
    if (active[w]) throw std::invalid_argument("frame relation has a cycle");
    active[w] = 1;
    int h = 0;
    for (int v = 0; v < size_; ++v)
      if (sees(w, v)) h = std::max(h, visit(v) + 1);
    active[w] = 0;
    return height[w] = h;
  };
  for (int w = 0; w < size_; ++w) visit(w);
  return height;
}

namespace {

bool holds(const Formula& f, const Frame& frame, int world) {
  switch (f.op()) {
    case Op::Top: return true;
    case Op::Bottom: return false;
    case Op::Not: return !holds(f.child(), frame, world);
    case Op::And: return holds(f.left(), frame, world) && holds(f.right(), frame, world);
    case Op::Or: return holds(f.left(), frame, world) || holds(f.right(), frame, world);
    case Op::Implies: return !holds(f.left(), frame, world) || holds(f.right(), frame, world);
    case Op::Iff: return holds(f.left(), frame, world) == holds(f.right(), frame, world);
    case Op::Box:
      for (int v = 0; v < frame.size(); ++v)
        if (frame.sees(world, v) && !holds(f.child(), frame, v)) return false;
      return true;
    default:
      throw std::invalid_argument("formula is not letterless");
  }
}

}  // namespace

std::vector<bool> kripke_values(const Formula& letterless, const Frame& frame) {
  std::vector<bool> out(frame.size());
  for (int w = 0; w < frame.size(); ++w) out[w] = holds(letterless, frame, w);
  return out;
}

bool height_semantics_crosscheck(const Formula& letterless, const Frame& frame) {
  if (!atoms_of(letterless).empty() || contains_provable(letterless)) {
    throw std::invalid_argument("formula is not letterless");
  }
  if (frame.size() > kMaxCrosscheckWorlds) throw std::invalid_argument("frame too large");
  if (!frame.is_transitive() || !frame.is_irreflexive()) {
    throw std::invalid_argument("frame must be transitive and irreflexive");
  }
  const std::vector<int> height = frame.heights();
  const int max_height = height.empty() ? 0 : *std::max_element(height.begin(), height.end());
  const std::vector<bool> chain = chain_trace(letterless, max_height + 1);
  const std::vector<bool> kripke = kripke_values(letterless, frame);
  for (int w = 0; w < frame.size(); ++w) {
    if (kripke[w] != chain[height[w]]) return false;
  }
  return true;
}

}  // namespace modalpd
