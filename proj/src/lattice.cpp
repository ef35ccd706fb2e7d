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

#include "fhsim/lattice.hpp"

#include <algorithm>
#include <array>

#include "fhsim/errors.hpp"

namespace fhsim {

namespace {

constexpr std::array<std::pair<BondClass, const char*>, 8> kClassNames{{
    {BondClass::kDimer, "dimer"},
    {BondClass::kRung, "rung"},
    {BondClass::kLegEven, "leg-even"},
    {BondClass::kLegOdd, "leg-odd"},
    {BondClass::kIntraPlaquette, "intra-plaquette"},
    {BondClass::kInterPlaquette, "inter-plaquette"},
    {BondClass::kNnnDiag1, "nnn-diag-1"},
    {BondClass::kNnnDiag2, "nnn-diag-2"},
}};

Bond ordered(int a, int b) { return a < b ? Bond{a, b} : Bond{b, a}; }

bool same(const Bond& a, const Bond& b) {
  return (a.i == b.i && a.j == b.j) || (a.i == b.j && a.j == b.i);
}

}  // namespace

std::string to_string(BondClass c) {
  for (const auto& [k, name] : kClassNames)
    if (k == c) return name;
  return "?";
}

BondClass bond_class_from_string(const std::string& s) {
  for (const auto& [k, name] : kClassNames)
    if (s == name) return k;
  throw ParameterError("unknown bond class '" + s + "'");
}

LatticeGeometry::LatticeGeometry(int rows, int cols, int max_sites) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw SizeError("lattice dimensions must be positive");
  if (rows * cols > max_sites)
    throw SizeError("lattice with " + std::to_string(rows * cols) + " sites exceeds the maximum of " +
                    std::to_string(max_sites));
  for (int x = 0; x + 1 < cols; ++x)
    for (int y = 0; y < rows; ++y) nn_.push_back({site(x, y), site(x + 1, y)});
  for (int x = 0; x < cols; ++x)
    for (int y = 0; y + 1 < rows; ++y) nn_.push_back({site(x, y), site(x, y + 1)});
  for (int x = 0; x + 1 < cols; ++x)
    for (int y = 0; y + 1 < rows; ++y) {
      nnn_.push_back({site(x, y), site(x + 1, y + 1)});
      nnn_.push_back(ordered(site(x, y + 1), site(x + 1, y)));
    }
  commuting_ = partition_commuting(*this, nn_);
}

std::vector<Bond> LatticeGeometry::bonds(BondClass c) const {
  std::vector<Bond> out;
  switch (c) {
    case BondClass::kNnnDiag1:
    case BondClass::kNnnDiag2:
      for (const Bond& b : nnn_) {
        // diag-1 rises with x: (x, y) - (x+1, y+1)
        const bool rising = y_of(b.j) > y_of(b.i);
        if (rising == (c == BondClass::kNnnDiag1)) out.push_back(b);
      }
      return out;
    default:
      break;
  }
  for (const Bond& b : nn_) {
    const bool horizontal = is_horizontal(b);
    const int x = x_of(b.i);
    const int y = y_of(b.i);
    const bool intra = horizontal ? (x % 2 == 0) : (y % 2 == 0);
    bool take = false;
    switch (c) {
      case BondClass::kRung: take = !horizontal; break;
      case BondClass::kDimer:
      case BondClass::kLegEven: take = horizontal && x % 2 == 0; break;
      case BondClass::kLegOdd: take = horizontal && x % 2 == 1; break;
      case BondClass::kIntraPlaquette: take = intra; break;
      case BondClass::kInterPlaquette: take = !intra; break;
      default: break;
    }
    if (take) out.push_back(b);
  }
  return out;
}

bool LatticeGeometry::is_nn(const Bond& b) const {
  return std::any_of(nn_.begin(), nn_.end(), [&](const Bond& o) { return same(o, b); });
}

bool LatticeGeometry::is_nnn(const Bond& b) const {
  return std::any_of(nnn_.begin(), nnn_.end(), [&](const Bond& o) { return same(o, b); });
}

std::vector<std::vector<Bond>> partition_commuting(const LatticeGeometry& g,
                                                   const std::vector<Bond>& bond_set) {
  std::vector<std::vector<Bond>> groups;
  const bool all_nn = std::all_of(bond_set.begin(), bond_set.end(), [&](const Bond& b) { return g.is_nn(b); });
  if (all_nn) {
    // horizontal even, horizontal odd, vertical even, vertical odd
    std::array<std::vector<Bond>, 4> cls;
    for (const Bond& b : bond_set) {
      const int lo = std::min(b.i, b.j);
      if (g.is_horizontal(b))
        cls[g.x_of(lo) % 2].push_back(b);
      else
        cls[2 + g.y_of(lo) % 2].push_back(b);
    }
    // Ladder order: rungs first, then even and odd legs.
    const std::array<int, 4> order = g.is_ladder() ? std::array<int, 4>{2, 3, 0, 1} : std::array<int, 4>{0, 1, 2, 3};
    for (int k : order)
      if (!cls[k].empty()) groups.push_back(std::move(cls[k]));
    return groups;
  }
  std::vector<std::vector<bool>> used;
  for (const Bond& b : bond_set) {
    bool placed = false;
    for (std::size_t k = 0; k < groups.size() && !placed; ++k) {
      if (used[k][b.i] || used[k][b.j]) continue;
      groups[k].push_back(b);
      used[k][b.i] = used[k][b.j] = true;
      placed = true;
    }
    if (!placed) {
      groups.push_back({b});
      used.emplace_back(g.num_sites(), false);
      used.back()[b.i] = used.back()[b.j] = true;
    }
  }
  return groups;
}

std::vector<Plaquette> plaquettes(const LatticeGeometry& g) {
  std::vector<Plaquette> out;
  for (int x = 0; x + 1 < g.cols(); ++x)
    for (int y = 0; y + 1 < g.rows(); ++y) out.push_back({x, y});
  return out;
}

}  // namespace fhsim
