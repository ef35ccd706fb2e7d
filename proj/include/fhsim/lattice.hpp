// Copyright 2026 The fhsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Rectangular lattices with open boundaries. Sites are indexed
// s = i_x * rows + i_y, so i_y is the fast axis and a 2 x L ladder has its
// legs along x.

#include <cstddef>
#include <string>
#include <vector>

namespace fhsim {

struct Bond {
  int i = 0;
  int j = 0;
  friend bool operator==(const Bond&, const Bond&) = default;
};

enum class BondClass {
  kDimer,
  kRung,
  kLegEven,
  kLegOdd,
  kIntraPlaquette,
  kInterPlaquette,
  kNnnDiag1,
  kNnnDiag2,
};

std::string to_string(BondClass c);
BondClass bond_class_from_string(const std::string& s);

inline constexpr int kMaxSites = 32;

class LatticeGeometry {
 public:
  LatticeGeometry() = default;
  // Throws SizeError for zero dimensions or more than max_sites sites.
  LatticeGeometry(int rows, int cols, int max_sites = kMaxSites);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int num_sites() const { return rows_ * cols_; }
  bool is_ladder() const { return rows_ == 2; }

  int site(int x, int y) const { return x * rows_ + y; }
  int x_of(int s) const { return s / rows_; }
  int y_of(int s) const { return s % rows_; }

  // Horizontal bonds (ordered by x, then y) followed by vertical bonds.
  const std::vector<Bond>& nn_bonds() const { return nn_; }
  const std::vector<Bond>& nnn_bonds() const { return nnn_; }

  std::vector<Bond> bonds(BondClass c) const;

  // Commuting NN groups (site-disjoint), see partition_commuting.
  const std::vector<std::vector<Bond>>& commuting_sets() const { return commuting_; }

  bool is_nn(const Bond& b) const;
  bool is_nnn(const Bond& b) const;
  bool is_horizontal(const Bond& b) const { return y_of(b.i) == y_of(b.j); }

  friend bool operator==(const LatticeGeometry& a, const LatticeGeometry& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Bond> nn_;
  std::vector<Bond> nnn_;
  std::vector<std::vector<Bond>> commuting_;
};

inline LatticeGeometry build_geometry(int rows, int cols) { return LatticeGeometry(rows, cols); }

// Splits bond_set into groups of pairwise site-disjoint bonds. NN bonds of a
// rectangular lattice use the four structured classes (horizontal/vertical x
// even/odd, empty classes dropped); any other set falls back to greedy
// coloring in input order.
std::vector<std::vector<Bond>> partition_commuting(const LatticeGeometry& g,
                                                   const std::vector<Bond>& bond_set);

// 2 x 2 plaquettes with lower-left corner (x, y); index = x * (rows-1) + y.
struct Plaquette {
  int x = 0;
  int y = 0;
};
std::vector<Plaquette> plaquettes(const LatticeGeometry& g);

}  // namespace fhsim
