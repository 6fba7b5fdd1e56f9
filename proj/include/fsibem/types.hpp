#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace fsibem {

using real = double;
using cplx = std::complex<double>;

template <class T, int M = Eigen::Dynamic, int N = Eigen::Dynamic>
using matrix = Eigen::Matrix<T, M, N>;
template <class T, int M = Eigen::Dynamic>
using vector = Eigen::Matrix<T, M, 1>;

template <class T> using vec2 = vector<T, 2>;
template <class T> using mat2 = matrix<T, 2, 2>;

using point = vec2<real>;
using cmatrix = matrix<cplx>;
using cvector = vector<cplx>;

inline constexpr real pi = 3.14159265358979323846;

// 90 degree rotation A = [0,-1;1,0]; t = A n on every panel.
template <class T> vec2<T> rot90(const vec2<T>& v) { return {-v(1), v(0)}; }
inline mat2<real> rotation_A() {
  mat2<real> a;
  a << 0, -1, 1, 0;
  return a;
}

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SingularityError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ResonanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NearSingularError : std::runtime_error {
  NearSingularError(const std::string& what, double omega_)
      : std::runtime_error(what), omega(omega_) {}
  double omega;
};

}  // namespace fsibem
