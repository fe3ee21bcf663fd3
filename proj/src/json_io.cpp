#include "theta/json_io.hpp"

#include <sstream>
#include <stdexcept>

namespace theta {

Json matrix_to_json(const Eigen::MatrixXd& m) {
    Json entries = Json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) entries.push_back(m(i, j));
    return Json{{"n", m.rows()}, {"entries", entries}};
}

Json matrix_to_json(const IntMat& m) {
    Json entries = Json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) entries.push_back(m(i, j).str());
    return Json{{"n", m.rows()}, {"entries", entries}};
}

Json vector_to_json(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
    const int n = j.at("n").get<int>();
    const auto& e = j.at("entries");
    if (static_cast<int>(e.size()) % n != 0) throw std::invalid_argument("matrix json: entry count mismatch");
    const int cols = static_cast<int>(e.size()) / n;
    Eigen::MatrixXd m(n, cols);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < cols; ++k) {
            const auto& v = e.at(static_cast<size_t>(i) * cols + k);
            m(i, k) = v.is_string() ? std::stod(v.get<std::string>()) : v.get<double>();
        }
    return m;
}

IntMat int_matrix_from_json(const Json& j) {
    const int n = j.at("n").get<int>();
    const auto& e = j.at("entries");
    if (static_cast<int>(e.size()) % n != 0) throw std::invalid_argument("matrix json: entry count mismatch");
    const int cols = static_cast<int>(e.size()) / n;
    IntMat m(n, cols);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < cols; ++k) {
            const auto& v = e.at(static_cast<size_t>(i) * cols + k);
            if (v.is_string())
                m(i, k) = BigInt(v.get<std::string>());
            else
                m(i, k) = BigInt(v.get<long long>());
        }
    return m;
}

Eigen::VectorXd vector_from_json(const Json& j) {
    Eigen::VectorXd v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = j.at(i).get<double>();
    return v;
}

Json to_json(const SymplecticMatrix& g) { return matrix_to_json(g.entries()); }

Json to_json(const IntegerSymplectic& g) { return matrix_to_json(g.mat()); }

Json to_json(const HeisenbergElement& h) {
    return Json{{"n", h.dim()}, {"x", vector_to_json(h.x)}, {"y", vector_to_json(h.y)}, {"t", h.t}};
}

Json to_json(const JacobiElement& j) { return Json{{"h", to_json(j.h)}, {"g", to_json(j.g)}}; }

Json to_json(const JacobiLatticeElement& w) {
    Json m = Json::array(), nv = Json::array();
    for (int i = 0; i < w.m.size(); ++i) {
        m.push_back(w.m(i));
        nv.push_back(w.n_vec(i));
    }
    return Json{{"m", m}, {"n_vec", nv}, {"t", w.t}, {"gamma", to_json(w.gamma)}};
}

Json to_json(const IwasawaCoords& c) {
    return Json{{"X", matrix_to_json(c.X)},
                {"U", matrix_to_json(c.U)},
                {"V", vector_to_json(c.V)},
                {"Q_re", matrix_to_json(c.Q.real())},
                {"Q_im", matrix_to_json(c.Q.imag())}};
}

Json to_json(const PartialCoords& c) {
    return Json{{"l", c.l},
                {"R", matrix_to_json(c.R)},
                {"S", matrix_to_json(c.S)},
                {"T", matrix_to_json(c.T)},
                {"U", matrix_to_json(c.U)},
                {"V", vector_to_json(c.V)},
                {"X_low", matrix_to_json(c.X_low)},
                {"Y_low", matrix_to_json(c.Y_low)},
                {"Q_re", matrix_to_json(c.Q.real())},
                {"Q_im", matrix_to_json(c.Q.imag())}};
}

Json to_json(const GrenierResult& r) {
    return Json{{"word", matrix_to_json(r.A)}, {"reduced", matrix_to_json(r.Y_reduced)}};
}

Json to_json(const SymplecticReduction& r) {
    return Json{{"word", to_json(r.gamma)}, {"reduced", to_json(r.reduced)}, {"coords", to_json(r.coords)}};
}

Json to_json(const JacobiReduction& r) {
    return Json{{"word", to_json(r.word)},
                {"reduced", to_json(r.reduced)},
                {"coords", to_json(iwasawa(r.reduced.g))}};
}

SymplecticMatrix symplectic_from_json(const Json& j) { return SymplecticMatrix(matrix_from_json(j)); }

IntegerSymplectic integer_symplectic_from_json(const Json& j) {
    return IntegerSymplectic(int_matrix_from_json(j));
}

HeisenbergElement heisenberg_from_json(const Json& j) {
    return HeisenbergElement(vector_from_json(j.at("x")), vector_from_json(j.at("y")),
                             j.at("t").get<double>());
}

JacobiElement jacobi_from_json(const Json& j) {
    return JacobiElement(heisenberg_from_json(j.at("h")), symplectic_from_json(j.at("g")));
}

} // namespace theta
