#include "whh/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>

#include <boost/math/special_functions/laguerre.hpp>
#include <unsupported/Eigen/FFT>

#include "whh/errors.hpp"
#include "whh/roots.hpp"

namespace whh {

namespace {

using cd = std::complex<double>;

constexpr int kMaxTail = 1 << 15;
constexpr int kCoordinateGrid = 8192;

// Number of terms after which the Laurent coefficients of r(lambda(z)) are below e^{-40}.
int rational_tail(const RationalFn& r)
{
    double rho = 0;
    if (r.den().degree() > 0) {
        for (const auto& root : find_roots(r.den())) {
            const std::complex<long double> p = root.value;
            const std::complex<long double> i(0, 1);
            double w = static_cast<double>(std::abs((p - i) / (p + i)));
            rho = std::max(rho, std::min(w, 1 / w));
        }
    }
    if (rho <= 0)
        return 4;
    return std::min(kMaxTail, static_cast<int>(std::ceil(40 / -std::log(rho))) + 4);
}

// Laurent coefficients of r on the circle, indices [-half, half); returned with offset half.
std::vector<cd> rational_coefficients(const RationalFn& r, int half)
{
    const int nf = 2 * half;
    const double pi = std::numbers::pi;
    std::vector<cd> values(nf);
    for (int k = 0; k < nf; ++k) {
        double theta = 2 * pi * (k + 0.5) / nf;
        long double lambda = -1.0L / std::tan(static_cast<long double>(theta) / 2);
        std::complex<long double> v = r(std::complex<long double>(lambda, 0));
        values[k] = cd(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    }
    Eigen::FFT<double> fft;
    std::vector<cd> spectrum;
    fft.fwd(spectrum, values);
    std::vector<cd> out(nf);
    for (int m = -half; m < half; ++m) {
        cd phase = std::polar(1.0, -pi * m / nf);
        out[m + half] = phase * spectrum[(m % nf + nf) % nf] / static_cast<double>(nf);
    }
    return out;
}

int next_pow2(int v)
{
    int p = 64;
    while (p < v)
        p *= 2;
    return p;
}

MatrixXcd assemble(const SymbolExpr& a, const SymbolExpr& b, int sign, int rows, int N)
{
    auto ca = circle_coefficients(a, -(N - 1), rows - 1);
    auto cb = circle_coefficients(b, 1, rows + N - 1);
    MatrixXcd m(rows, N);
    for (int k = 0; k < rows; ++k)
        for (int j = 0; j < N; ++j)
            m(k, j) = ca[k - j + N - 1] - static_cast<double>(sign) * cb[k + j];
    return m;
}

Eigen::VectorXd singular_values(const MatrixXcd& m)
{
    return Eigen::BDCSVD<MatrixXcd>(m).singularValues();
}

void require_independent(const MatrixXcd& A, const char* which)
{
    if (A.cols() == 0)
        return;
    Eigen::VectorXd s = singular_values(A);
    if (!(s(0) > 0) || s(s.size() - 1) <= 1e-10 * s(0))
        throw Error(ErrorCode::DegenerateBasis, std::string("columns of ") + which + " are numerically dependent",
                    "smallest/largest singular value " + std::to_string(s(0) > 0 ? s(s.size() - 1) / s(0) : 0.0));
}

MatrixXcd orthonormal_columns(const MatrixXcd& A)
{
    Eigen::HouseholderQR<MatrixXcd> qr(A);
    return qr.householderQ() * MatrixXcd::Identity(A.rows(), A.cols());
}

template <class T>
void put(std::ostream& out, T v)
{
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes, bytes + sizeof(T));
    out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

} // namespace

std::vector<double> exponential_coefficients(double delta, int count)
{
    std::vector<double> e(count);
    const double scale = std::exp(-delta);
    for (int m = 0; m < count; ++m) {
        // L_m^{(-1)}(x) = -(x/m) L_{m-1}^{(1)}(x)
        double l = m == 0 ? 1.0 : -(2 * delta / m) * boost::math::laguerre(m - 1, 1u, 2 * delta);
        e[m] = scale * l;
    }
    return e;
}

std::vector<cd> circle_coefficients(const SymbolExpr& a, int lo, int hi)
{
    const double delta = static_cast<double>(to_long_double(a.delta()));
    const int tail = rational_tail(a.rat());
    const int reach = std::max(std::abs(lo), std::abs(hi)) + tail + 1;
    const int half = next_pow2(2 * reach) / 2;
    const std::vector<cd> r = rational_coefficients(a.rat(), half);
    auto rc = [&](int m) { return std::abs(m) < half ? r[m + half] : cd(0); };

    std::vector<cd> out(hi - lo + 1);
    if (delta == 0) {
        for (int m = lo; m <= hi; ++m)
            out[m - lo] = rc(m);
        return out;
    }
    const int dir = delta > 0 ? 1 : -1;
    const int count = std::max(std::abs(lo), std::abs(hi)) + tail + 1;
    const std::vector<double> e = exponential_coefficients(std::abs(delta), count);
    for (int m = lo; m <= hi; ++m) {
        // c_m = sum_l e_l r_{m - dir l}
        const int centre = dir * m;
        cd s = 0;
        for (int l = std::max(0, centre - tail); l <= centre + tail && l < count; ++l)
            s += e[l] * rc(m - dir * l);
        out[m - lo] = s;
    }
    return out;
}

GalerkinMatrix galerkin_matrix(const SymbolExpr& a, const SymbolExpr& b, int sign, int N)
{
    if (N < 1)
        throw std::invalid_argument("galerkin_matrix: N must be positive");
    GalerkinMatrix g;
    g.N = N;
    g.a = a;
    g.b = b;
    g.sign = sign;
    g.section = assemble(a, b, sign, 2 * N, N);
    g.entries = g.section.topRows(N);
    return g;
}

MatrixXcd galerkin_matrix_closed_form(const SymbolExpr& a, const SymbolExpr& b, int sign, int N)
{
    std::vector<PiecewiseExpPoly> basis;
    for (int k = 0; k < N; ++k)
        basis.push_back(psi(k));
    MatrixXcd m(N, N);
    for (int j = 0; j < N; ++j) {
        PiecewiseExpPoly image = wh_apply(a, basis[j]) + scale(static_cast<long double>(sign), hankel_apply(b, basis[j]));
        for (int k = 0; k < N; ++k) {
            cplx v = inner_product(image, basis[k]);
            m(k, j) = cd(static_cast<double>(v.real()), static_cast<double>(v.imag()));
        }
    }
    return m;
}

int numeric_defect(const GalerkinMatrix& m, double tol)
{
    Eigen::VectorXd s = singular_values(m.section);
    const double cut = tol * s(0);
    return static_cast<int>(std::count_if(s.data(), s.data() + s.size(), [&](double v) { return v <= cut; }));
}

MatrixXcd numeric_null_space(const GalerkinMatrix& m, double tol)
{
    Eigen::BDCSVD<MatrixXcd> svd(m.section, Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double cut = tol * s(0);
    int first = static_cast<int>(s.size());
    while (first > 0 && s(first - 1) <= cut)
        --first;
    return svd.matrixV().rightCols(s.size() - first);
}

NumericDefects numeric_defects(const SymbolExpr& a, const SymbolExpr& b, int sign, int N, double tol)
{
    return {numeric_defect(galerkin_matrix(a, b, sign, N), tol),
            numeric_defect(galerkin_matrix(conjugate(a), conjugate(reflect(b)), sign, N), tol)};
}

std::vector<int> nullity_growth(const SymbolExpr& a, const SymbolExpr& b, int sign, const std::vector<int>& sizes,
                                double tol)
{
    std::vector<int> out;
    for (int N : sizes)
        out.push_back(numeric_defect(galerkin_matrix(a, b, sign, N), tol));
    return out;
}

long double residual_norm(const SymbolExpr& a, const SymbolExpr& b, int sign, const PiecewiseExpPoly& h)
{
    return l2_norm(wh_apply(a, h) + scale(static_cast<long double>(sign), hankel_apply(b, h)));
}

MatrixXcd psi_coordinates(const std::vector<PiecewiseExpPoly>& basis, int N)
{
    const int nf = kCoordinateGrid;
    const long double pi = std::numbers::pi_v<long double>;
    const std::complex<long double> i(0, 1);
    MatrixXcd out(N, static_cast<int>(basis.size()));
    for (std::size_t col = 0; col < basis.size(); ++col) {
        if (basis[col].support_min() < 0)
            throw std::invalid_argument("psi_coordinates: function not supported on [0, inf)");
        FourierImage F = fourier(basis[col]);
        std::vector<std::complex<long double>> G(nf);
        for (int k = 0; k < nf; ++k) {
            long double theta = 2 * pi * (k + 0.5L) / nf;
            long double lambda = -1 / std::tan(theta / 2);
            G[k] = F(lambda) * (lambda + i) / (i * std::sqrt(2.0L));
        }
        for (int m = 0; m < N; ++m) {
            std::complex<long double> s = 0;
            for (int k = 0; k < nf; ++k)
                s += G[k] * std::polar(1.0L, -m * 2 * pi * (k + 0.5L) / nf);
            s /= static_cast<long double>(nf);
            out(m, static_cast<int>(col)) = cd(static_cast<double>(s.real()), static_cast<double>(s.imag()));
        }
    }
    return out;
}

double subspace_angle(const MatrixXcd& A, const MatrixXcd& B)
{
    if (A.rows() != B.rows())
        throw std::invalid_argument("subspace_angle: coordinate lengths differ");
    require_independent(A, "A");
    require_independent(B, "B");
    if (A.cols() != B.cols())
        return std::numbers::pi / 2;
    if (A.cols() == 0)
        return 0;
    MatrixXcd qa = orthonormal_columns(A);
    MatrixXcd qb = orthonormal_columns(B);
    MatrixXcd residual = qb - qa * (qa.adjoint() * qb);
    double s = singular_values(residual)(0);
    return std::asin(std::min(1.0, s));
}

nlohmann::json to_json(const GalerkinMatrix& m)
{
    nlohmann::json rows = nlohmann::json::array();
    for (int k = 0; k < m.N; ++k) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.N; ++j)
            row.push_back({m.entries(k, j).real(), m.entries(k, j).imag()});
        rows.push_back(row);
    }
    return {{"N", m.N},
            {"a", m.a.to_string()},
            {"b", m.b.to_string()},
            {"sign", m.sign > 0 ? "plus" : "minus"},
            {"entries", rows}};
}

void write_binary(const GalerkinMatrix& m, std::ostream& out)
{
    put<std::int64_t>(out, m.N);
    for (int k = 0; k < m.N; ++k)
        for (int j = 0; j < m.N; ++j) {
            put<double>(out, m.entries(k, j).real());
            put<double>(out, m.entries(k, j).imag());
        }
}

} // namespace whh
