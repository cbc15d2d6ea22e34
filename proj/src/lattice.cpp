// Copyright 2026 The mpsrnn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mpsrnn/lattice.hpp"

#include "mpsrnn/errors.hpp"

namespace mpsrnn {

std::string to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Chain:
      return "chain";
    case LatticeKind::Square:
      return "square";
    case LatticeKind::Triangular:
      return "triangular";
  }
  return "?";
}

LatticeKind lattice_kind_from_string(const std::string &name) {
  if (name == "chain") return LatticeKind::Chain;
  if (name == "square") return LatticeKind::Square;
  if (name == "triangular") return LatticeKind::Triangular;
  throw ConfigError("unknown lattice kind: " + name);
}

Lattice::Lattice(LatticeKind kind, int L) : kind_(kind), L_(L) {
  if (L < 1) throw ConfigError("lattice size L must be >= 1");
  rows_ = (kind == LatticeKind::Chain) ? 1 : L;
  V_ = L_ * rows_;

  coords_.resize(V_);
  for (int y = 0; y < rows_; ++y) {
    for (int x = 0; x < L_; ++x) {
      coords_[snake_index(x, y)] = {x, y};
    }
  }

  auto add_edge = [&](int x0, int y0, int x1, int y1) {
    edges_.emplace_back(snake_index(x0, y0), snake_index(x1, y1));
  };
  for (int y = 0; y < rows_; ++y) {
    for (int x = 0; x + 1 < L_; ++x) add_edge(x, y, x + 1, y);
  }
  for (int y = 0; y + 1 < rows_; ++y) {
    for (int x = 0; x < L_; ++x) add_edge(x, y, x, y + 1);
  }
  if (kind == LatticeKind::Triangular) {
    // one diagonal per plaquette, fixed orientation (x,y)-(x+1,y+1)
    for (int y = 0; y + 1 < rows_; ++y) {
      for (int x = 0; x + 1 < L_; ++x) add_edge(x, y, x + 1, y + 1);
    }
  }
}

int Lattice::snake_index(int x, int y) const {
  if (x < 0 || x >= L_ || y < 0 || y >= rows_)
    throw ShapeError("lattice coordinate out of range");
  return (y % 2 == 0) ? y * L_ + x : y * L_ + (L_ - 1 - x);
}

std::pair<int, int> Lattice::site_coords(int index) const {
  if (index < 0 || index >= V_) throw ShapeError("site index out of range");
  int y = index / L_;
  int r = index % L_;
  int x = (y % 2 == 0) ? r : L_ - 1 - r;
  return {x, y};
}

std::pair<PredRef, PredRef> Lattice::predecessors(int x, int y) const {
  if (x < 0 || x >= L_ || y < 0 || y >= rows_)
    throw ShapeError("lattice coordinate out of range");

  PredRef horizontal;
  int hx = (y % 2 == 0) ? x - 1 : x + 1;
  if (hx >= 0 && hx < L_) {
    horizontal = PredRef::at(snake_index(hx, y));
  } else if (hx == -1 && y == 0) {
    horizontal = PredRef::ones();  // h^(-1,0) = (1,...,1)
  } else {
    horizontal = PredRef::zero();
  }

  PredRef vertical = (y > 0) ? PredRef::at(snake_index(x, y - 1)) : PredRef::zero();
  return {horizontal, vertical};
}

PredRef Lattice::snake_predecessor(int index) const {
  if (index < 0 || index >= V_) throw ShapeError("site index out of range");
  return index == 0 ? PredRef::ones() : PredRef::at(index - 1);
}

bool Lattice::snake_step_is_vertical(int index) const {
  if (index < 0 || index >= V_) throw ShapeError("site index out of range");
  return index > 0 && index % L_ == 0;
}

Lattice build_lattice(LatticeKind kind, int L) { return Lattice(kind, L); }

}  // namespace mpsrnn
