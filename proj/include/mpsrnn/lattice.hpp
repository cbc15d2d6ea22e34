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

#ifndef MPSRNN_LATTICE_HPP
#define MPSRNN_LATTICE_HPP

#include <string>
#include <utility>
#include <vector>

namespace mpsrnn {

enum class LatticeKind { Chain, Square, Triangular };

std::string to_string(LatticeKind kind);
LatticeKind lattice_kind_from_string(const std::string &name);

/// Reference to the memory feeding a recurrence input: either a real site
/// (by snake index) or one of the two boundary values.
struct PredRef {
  enum class Tag { Ones, Zero, Site };
  Tag tag = Tag::Zero;
  int site = -1;  // snake index, valid only for Tag::Site

  static PredRef ones() { return {Tag::Ones, -1}; }
  static PredRef zero() { return {Tag::Zero, -1}; }
  static PredRef at(int s) { return {Tag::Site, s}; }
  bool is_site() const { return tag == Tag::Site; }
};

/// Open-boundary lattice with snake-ordered sites.
///
/// Sites are addressed either by (x, y) coordinates or by their snake index:
/// row y is traversed left-to-right when y is even and right-to-left when y
/// is odd. A chain is the degenerate case of a single row. The triangular
/// lattice is the square lattice plus one fixed diagonal (x,y)-(x+1,y+1) per
/// plaquette. Immutable after construction.
class Lattice {
 public:
  Lattice(LatticeKind kind, int L);

  LatticeKind kind() const { return kind_; }
  int L() const { return L_; }
  int num_sites() const { return V_; }
  int num_rows() const { return rows_; }

  const std::vector<std::pair<int, int>> &edges() const { return edges_; }

  /// Snake index of coordinate (x, y). Throws on out-of-range input.
  int snake_index(int x, int y) const;
  /// Inverse of snake_index.
  std::pair<int, int> site_coords(int index) const;

  /// Memory sources for the update at (x, y): {horizontal, vertical}.
  /// The horizontal predecessor is (x-1, y) on even rows and (x+1, y) on odd
  /// rows; the vertical one is (x, y-1). The (-1, 0) boundary is all-ones,
  /// every other out-of-lattice boundary is zero.
  std::pair<PredRef, PredRef> predecessors(int x, int y) const;

  /// Predecessor along the snake ordering itself (all-ones before site 0).
  PredRef snake_predecessor(int index) const;

  /// True if the snake enters site `index` from its vertical neighbor, i.e.
  /// the site starts a new row.
  bool snake_step_is_vertical(int index) const;

 private:
  LatticeKind kind_;
  int L_;
  int rows_;
  int V_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::pair<int, int>> coords_;
};

Lattice build_lattice(LatticeKind kind, int L);

}  // namespace mpsrnn

#endif  // MPSRNN_LATTICE_HPP
