#include "triosc/linalg3.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace triosc {

Vec3 operator+(const Vec3& u, const Vec3& v) { return Vec3{{u[0] + v[0], u[1] + v[1], u[2] + v[2]}}; }
Vec3 operator-(const Vec3& u, const Vec3& v) { return Vec3{{u[0] - v[0], u[1] - v[1], u[2] - v[2]}}; }
Vec3 operator*(double s, const Vec3& v) { return Vec3{{s * v[0], s * v[1], s * v[2]}}; }

double dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }
double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 cross(const Vec3& u, const Vec3& v) {
    return Vec3{{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                 u[0] * v[1] - u[1] * v[0]}};
}

Mat3 Mat3::identity() {
    Mat3 r;
    r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
    return r;
}

Mat3 Mat3::transpose() const {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
}

Vec3 Mat3::row(std::size_t r) const { return Vec3{{(*this)(r, 0), (*this)(r, 1), (*this)(r, 2)}}; }
Vec3 Mat3::col(std::size_t c) const { return Vec3{{(*this)(0, c), (*this)(1, c), (*this)(2, c)}}; }

Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

Mat3 operator-(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.m[i] = a.m[i] - b.m[i];
    return r;
}

Vec3 operator*(const Mat3& a, const Vec3& v) {
    return Vec3{{dot(a.row(0), v), dot(a.row(1), v), dot(a.row(2), v)}};
}

double frobenius(const Mat3& a) {
    double s = 0.0;
    for (double x : a.m) s += x * x;
    return std::sqrt(s);
}

double det(const Mat3& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

Mat3 SymMat3::to_mat3() const {
    Mat3 r;
    r(0, 0) = d1;
    r(1, 1) = d2;
    r(2, 2) = d3;
    r(0, 1) = r(1, 0) = o12;
    r(0, 2) = r(2, 0) = o13;
    r(1, 2) = r(2, 1) = o23;
    return r;
}

Vec3 SymMat3::apply(const Vec3& v) const {
    return Vec3{{d1 * v[0] + o12 * v[1] + o13 * v[2],
                 o12 * v[0] + d2 * v[1] + o23 * v[2],
                 o13 * v[0] + o23 * v[1] + d3 * v[2]}};
}

double SymMat3::frobenius() const {
    return std::sqrt(d1 * d1 + d2 * d2 + d3 * d3 + 2.0 * (o12 * o12 + o13 * o13 + o23 * o23));
}

double SymMat3::off_frobenius() const {
    return std::sqrt(2.0 * (o12 * o12 + o13 * o13 + o23 * o23));
}

SymMat3 operator*(double s, const SymMat3& g) {
    return SymMat3{s * g.d1, s * g.d2, s * g.d3, s * g.o12, s * g.o13, s * g.o23};
}

SymMat3 conjugate(const SymMat3& g, const Mat3& r) {
    const Mat3 m = r.transpose() * (g.to_mat3() * r);
    SymMat3 out;
    out.d1 = m(0, 0);
    out.d2 = m(1, 1);
    out.d3 = m(2, 2);
    out.o12 = 0.5 * (m(0, 1) + m(1, 0));
    out.o13 = 0.5 * (m(0, 2) + m(2, 0));
    out.o23 = 0.5 * (m(1, 2) + m(2, 1));
    return out;
}

namespace {

// One Jacobi rotation zeroing a(p,q); accumulates the rotation into q_acc.
void jacobi_rotate(Mat3& a, Mat3& q_acc, std::size_t p, std::size_t q) {
    const double apq = a(p, q);
    if (apq == 0.0) return;
    const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
    const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                  : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    for (std::size_t k = 0; k < 3; ++k) {
        const double akp = a(k, p), akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
    }
    for (std::size_t k = 0; k < 3; ++k) {
        const double apk = a(p, k), aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
    }
    // Pin the zeroed pair; the symmetric updates above leave roundoff there.
    a(p, q) = a(q, p) = 0.0;

    for (std::size_t k = 0; k < 3; ++k) {
        const double qkp = q_acc(k, p), qkq = q_acc(k, q);
        q_acc(k, p) = c * qkp - s * qkq;
        q_acc(k, q) = s * qkp + c * qkq;
    }
}

double off_diagonal_norm(const Mat3& a) {
    return std::sqrt(a(0, 1) * a(0, 1) + a(1, 0) * a(1, 0) + a(0, 2) * a(0, 2) +
                     a(2, 0) * a(2, 0) + a(1, 2) * a(1, 2) + a(2, 1) * a(2, 1));
}

}  // namespace

JacobiResult jacobi_eigen(const SymMat3& g, double tol, int max_sweeps) {
    Mat3 a = g.to_mat3();
    Mat3 q = Mat3::identity();
    const double scale = g.frobenius();
    const double stop = tol * scale;

    JacobiResult result;
    double off = off_diagonal_norm(a);
    int sweeps = 0;
    while (off > stop && sweeps < max_sweeps) {
        // Fixed cyclic pivot order keeps runs reproducible across platforms.
        jacobi_rotate(a, q, 0, 1);
        jacobi_rotate(a, q, 0, 2);
        jacobi_rotate(a, q, 1, 2);
        ++sweeps;
        off = off_diagonal_norm(a);
    }
    if (off > stop) {
        throw NumericalError(ErrorKind::NonConvergence,
                             "jacobi_eigen: off-diagonal norm above tolerance after max sweeps");
    }

    // Ascending sort with stable tie-break on the original column index.
    std::array<std::size_t, 3> order{0, 1, 2};
    std::array<double, 3> vals{a(0, 0), a(1, 1), a(2, 2)};
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return vals[i] < vals[j]; });

    JacobiResult out;
    out.sweeps = sweeps;
    out.off_norm = off;
    for (std::size_t k = 0; k < 3; ++k) {
        out.eigenvalues[k] = vals[order[k]];
        for (std::size_t r = 0; r < 3; ++r) out.eigenvectors(r, k) = q(r, order[k]);
    }
    if (det(out.eigenvectors) < 0.0) {
        for (std::size_t r = 0; r < 3; ++r) out.eigenvectors(r, 2) = -out.eigenvectors(r, 2);
    }
    return out;
}

Mat3 axis_rotation(int axis, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Mat3 r = Mat3::identity();
    switch (axis) {
        case 1:
            r(1, 1) = c; r(1, 2) = -s;
            r(2, 1) = s; r(2, 2) = c;
            break;
        case 2:
            r(0, 0) = c; r(0, 2) = s;
            r(2, 0) = -s; r(2, 2) = c;
            break;
        case 3:
            r(0, 0) = c; r(0, 1) = -s;
            r(1, 0) = s; r(1, 1) = c;
            break;
        default:
            throw NumericalError(ErrorKind::UsageError, "axis_rotation: axis must be 1, 2 or 3");
    }
    return r;
}

std::pair<double, double> orthogonality_residual(const Mat3& m) {
    const Mat3 gram = m.transpose() * m;
    return {frobenius(gram - Mat3::identity()), det(m) - 1.0};
}

}  // namespace triosc
