#include "edisc/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace edisc::la {

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec mat_vec(const Mat& A, const Vec& x) {
  Vec y(A.size(), 0.0);
  for (size_t r = 0; r < A.size(); ++r) y[r] = dot(A[r], x);
  return y;
}

Mat mat_mul(const Mat& A, const Mat& B) {
  size_t m = A.size(), k = B.size(), n = B.empty() ? 0 : B[0].size();
  Mat C(m, Vec(n, 0.0));
  for (size_t i = 0; i < m; ++i) {
    if (A[i].size() != k) throw std::invalid_argument("dimension mismatch");
    for (size_t l = 0; l < k; ++l) {
      double a = A[i][l];
      if (a == 0.0) continue;
      for (size_t j = 0; j < n; ++j) C[i][j] += a * B[l][j];
    }
  }
  return C;
}

Mat transpose(const Mat& A) {
  size_t m = A.size(), n = A.empty() ? 0 : A[0].size();
  Mat T(n, Vec(m, 0.0));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < n; ++j) T[j][i] = A[i][j];
  return T;
}

Mat identity(int n) {
  Mat I(n, Vec(n, 0.0));
  for (int i = 0; i < n; ++i) I[i][i] = 1.0;
  return I;
}

Vec solve(Mat A, Vec b) {
  const int n = static_cast<int>(A.size());
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("dimension mismatch");
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-12) throw std::runtime_error("singular system");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      double f = A[r][col] / A[col][col];
      if (f == 0.0) continue;
      for (int c2 = col; c2 < n; ++c2) A[r][c2] -= f * A[col][c2];
      b[r] -= f * b[col];
    }
  }
  Vec x(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c2 = r + 1; c2 < n; ++c2) s -= A[r][c2] * x[c2];
    x[r] = s / A[r][r];
  }
  return x;
}

Mat orthogonal_completion_householder(const Vec& u) {
  const int n = static_cast<int>(u.size());
  double nrm = norm2(u);
  if (nrm == 0.0) throw std::invalid_argument("zero vector has no completion");
  Vec q(n);
  for (int i = 0; i < n; ++i) q[i] = u[i] / nrm;

  // reflect e1 onto q: H = I - 2 v v^T with v = (e1 - q)/||e1 - q||.
  Vec v(n);
  v[0] = 1.0 - q[0];
  for (int i = 1; i < n; ++i) v[i] = -q[i];
  double vn = norm2(v);
  if (vn < 1e-14) return identity(n);  // q is already e1
  for (int i = 0; i < n; ++i) v[i] /= vn;

  Mat H = identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) H[i][j] -= 2.0 * v[i] * v[j];
  // first column equals q exactly up to rounding
  return H;
}

}  // namespace edisc::la
