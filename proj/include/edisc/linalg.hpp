#pragma once

#include <vector>

namespace edisc::la {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;  // row-major

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
Vec mat_vec(const Mat& A, const Vec& x);
Mat mat_mul(const Mat& A, const Mat& B);
Mat transpose(const Mat& A);
Mat identity(int n);

// Solve A x = b by Gaussian elimination with partial pivoting. Throws on a
// (numerically) singular system.
Vec solve(Mat A, Vec b);

// Orthogonal matrix whose first column is u/||u|| (Householder reflection
// mapping e1 to that direction). Throws on the zero vector.
Mat orthogonal_completion_householder(const Vec& u);

}  // namespace edisc::la
