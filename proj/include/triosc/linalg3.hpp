#pragma once

// Fixed-size 3-vector / 3x3-matrix arithmetic and the cyclic Jacobi
// eigensolver that serves as the ground-truth oracle for every closed-form
// route in this library.

#include <array>
#include <cstddef>
#include <utility>

#include "triosc/errors.hpp"

namespace triosc {

struct Vec3 {
    std::array<double, 3> a{0.0, 0.0, 0.0};

    double& operator[](std::size_t i) { return a[i]; }
    double operator[](std::size_t i) const { return a[i]; }
};

Vec3 operator+(const Vec3& u, const Vec3& v);
Vec3 operator-(const Vec3& u, const Vec3& v);
Vec3 operator*(double s, const Vec3& v);
double dot(const Vec3& u, const Vec3& v);
double norm(const Vec3& v);
Vec3 cross(const Vec3& u, const Vec3& v);

// Row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> m{};

    double& operator()(std::size_t r, std::size_t c) { return m[3 * r + c]; }
    double operator()(std::size_t r, std::size_t c) const { return m[3 * r + c]; }

    static Mat3 identity();
    Mat3 transpose() const;
    Vec3 row(std::size_t r) const;
    Vec3 col(std::size_t c) const;
};

Mat3 operator*(const Mat3& a, const Mat3& b);
Mat3 operator-(const Mat3& a, const Mat3& b);
Vec3 operator*(const Mat3& a, const Vec3& v);
double frobenius(const Mat3& a);
double det(const Mat3& a);

// Symmetric 3x3 with shared storage for the mirrored entries, so the
// Mat3 view is symmetric bit-for-bit.
struct SymMat3 {
    double d1 = 0.0, d2 = 0.0, d3 = 0.0;    // diagonal
    double o12 = 0.0, o13 = 0.0, o23 = 0.0; // off-diagonal

    Mat3 to_mat3() const;
    Vec3 apply(const Vec3& v) const;
    double trace() const { return d1 + d2 + d3; }
    double frobenius() const;
    // Frobenius norm of the off-diagonal part (both triangles).
    double off_frobenius() const;

    static SymMat3 diag(double a, double b, double c) { return SymMat3{a, b, c, 0.0, 0.0, 0.0}; }
};

SymMat3 operator*(double s, const SymMat3& g);

// g -> R^T g R for an arbitrary square R (symmetric result up to roundoff
// when R is orthogonal; we re-symmetrize by averaging the mirror pair).
SymMat3 conjugate(const SymMat3& g, const Mat3& r);

struct JacobiResult {
    std::array<double, 3> eigenvalues{}; // ascending
    Mat3 eigenvectors;                   // columns, orthonormal, det +1
    int sweeps = 0;
    double off_norm = 0.0;               // final off-diagonal Frobenius norm
};

// Cyclic Jacobi rotations with fixed pivot order (0,1),(0,2),(1,2) until the
// off-diagonal Frobenius norm drops below tol * ||g||_F or the sweep budget
// is exhausted (NonConvergence). Ties in the ascending sort are broken by
// original column index; det of the eigenvector matrix is forced to +1 by
// flipping the last column if needed.
JacobiResult jacobi_eigen(const SymMat3& g, double tol = 1e-14, int max_sweeps = 32);

// Single-axis rotation about axis 1, 2 or 3. The entry layout matches the
// three factors of the standard X1-X2-X3 Euler composition:
//   axis 1: [[1,0,0],[0,c,-s],[0,s,c]]
//   axis 2: [[c,0,s],[0,1,0],[-s,0,c]]
//   axis 3: [[c,-s,0],[s,c,0],[0,0,1]]
Mat3 axis_rotation(int axis, double angle);

// (||m^T m - I||_F, det(m) - 1): both are zero for a proper rotation.
std::pair<double, double> orthogonality_residual(const Mat3& m);

}  // namespace triosc
