#pragma once

// Composite Hilbert space of two five-level atoms (A, B) and one truncated
// cavity mode. Basis ordering is row-major with atom A slowest:
//
//   index = (5 * levelA + levelB) * (n_max + 1) + photons
//
// with the level order g0, g1, ga, ee, uu.

#include <array>
#include <complex>
#include <cstddef>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qzdswap {

using Complex = std::complex<double>;
using Operator = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;
using DenseOperator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Atomic levels: three ground states |0>, |1>, |a> and two excited states |e>, |u>.
enum class AtomLevel : int { g0 = 0, g1 = 1, ga = 2, ee = 3, uu = 4 };

inline constexpr std::array<AtomLevel, 5> kAllLevels{AtomLevel::g0, AtomLevel::g1, AtomLevel::ga,
                                                     AtomLevel::ee, AtomLevel::uu};
inline constexpr std::array<AtomLevel, 3> kGroundLevels{AtomLevel::g0, AtomLevel::g1, AtomLevel::ga};
inline constexpr std::array<AtomLevel, 2> kExcitedLevels{AtomLevel::ee, AtomLevel::uu};

constexpr bool is_excited(AtomLevel l) { return l == AtomLevel::ee || l == AtomLevel::uu; }
constexpr int level_value(AtomLevel l) { return static_cast<int>(l); }

inline char level_char(AtomLevel l) {
  static constexpr std::array<char, 5> chars{'0', '1', 'a', 'e', 'u'};
  return chars[static_cast<std::size_t>(level_value(l))];
}

inline AtomLevel level_from_char(char c) {
  switch (c) {
    case '0': return AtomLevel::g0;
    case '1': return AtomLevel::g1;
    case 'a': return AtomLevel::ga;
    case 'e': return AtomLevel::ee;
    case 'u': return AtomLevel::uu;
    default: throw std::invalid_argument(std::string("unknown atomic level '") + c + "'");
  }
}

enum class Atom { A, B };

class TruncationError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct BasisState {
  AtomLevel levelA = AtomLevel::g0;
  AtomLevel levelB = AtomLevel::g0;
  int photons = 0;

  friend bool operator==(const BasisState&, const BasisState&) = default;

  /// Compact label such as "1a_0" (atom A, atom B, photon number).
  std::string label() const {
    return std::string{level_char(levelA), level_char(levelB)} + "_" + std::to_string(photons);
  }

  /// Parses "01", "1a,0", "1a_1".
  static BasisState parse(const std::string& text) {
    if (text.size() < 2) throw std::invalid_argument("basis label too short: " + text);
    BasisState s{level_from_char(text[0]), level_from_char(text[1]), 0};
    if (text.size() > 2) {
      if (text[2] != ',' && text[2] != '_') throw std::invalid_argument("bad basis label: " + text);
      s.photons = std::stoi(text.substr(3));
    }
    return s;
  }
};

struct SpaceDescriptor {
  int n_max = 1;

  explicit SpaceDescriptor(int n = 1) : n_max(n) {
    if (n < 0) throw std::invalid_argument("n_max must be non-negative");
  }

  int photon_levels() const { return n_max + 1; }
  int dim() const { return 25 * (n_max + 1); }

  friend bool operator==(const SpaceDescriptor&, const SpaceDescriptor&) = default;
};

inline int basis_index(const BasisState& s, const SpaceDescriptor& d) {
  if (s.photons < 0 || s.photons > d.n_max) {
    throw TruncationError("photon number " + std::to_string(s.photons) + " exceeds n_max = " +
                          std::to_string(d.n_max));
  }
  return (5 * level_value(s.levelA) + level_value(s.levelB)) * d.photon_levels() + s.photons;
}

inline BasisState basis_state(int index, const SpaceDescriptor& d) {
  if (index < 0 || index >= d.dim()) throw std::out_of_range("basis index out of range");
  const int n = index % d.photon_levels();
  const int pair = index / d.photon_levels();
  return {static_cast<AtomLevel>(pair / 5), static_cast<AtomLevel>(pair % 5), n};
}

inline StateVector basis_vector(const BasisState& s, const SpaceDescriptor& d) {
  StateVector v = StateVector::Zero(d.dim());
  v(basis_index(s, d)) = 1.0;
  return v;
}

/// sigma^{atom}_{l,k} = |l><k| on one atom, identity on the other atom and the cavity.
inline Operator atomic_operator(Atom atom, AtomLevel l, AtomLevel k, const SpaceDescriptor& d) {
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<std::size_t>(5 * d.photon_levels()));
  for (AtomLevel other : kAllLevels) {
    for (int n = 0; n <= d.n_max; ++n) {
      const BasisState row = atom == Atom::A ? BasisState{l, other, n} : BasisState{other, l, n};
      const BasisState col = atom == Atom::A ? BasisState{k, other, n} : BasisState{other, k, n};
      entries.emplace_back(basis_index(row, d), basis_index(col, d), 1.0);
    }
  }
  Operator op(d.dim(), d.dim());
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

/// Cavity annihilation operator a|n> = sqrt(n)|n-1>, identity on both atoms.
inline Operator annihilation(const SpaceDescriptor& d) {
  std::vector<Eigen::Triplet<Complex>> entries;
  for (AtomLevel la : kAllLevels) {
    for (AtomLevel lb : kAllLevels) {
      for (int n = 1; n <= d.n_max; ++n) {
        entries.emplace_back(basis_index({la, lb, n - 1}, d), basis_index({la, lb, n}, d),
                             std::sqrt(static_cast<double>(n)));
      }
    }
  }
  Operator op(d.dim(), d.dim());
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

inline Operator identity_operator(const SpaceDescriptor& d) {
  Operator id(d.dim(), d.dim());
  id.setIdentity();
  return id;
}

inline Operator adjoint(const Operator& op) { return Operator(op.adjoint()); }

}  // namespace qzdswap
