#pragma once

// JSON wire format. Matrices are {"n": int, "entries": row-major array},
// entries as doubles for real carriers and decimal strings for exact ones.

#include "theta/decompose.hpp"
#include "theta/group.hpp"
#include "theta/reduce.hpp"

#include "json.hpp"

namespace theta {

using Json = nlohmann::json;

Json matrix_to_json(const Eigen::MatrixXd& m);
Json matrix_to_json(const IntMat& m);
Json vector_to_json(const Eigen::VectorXd& v);

Eigen::MatrixXd matrix_from_json(const Json& j);
IntMat int_matrix_from_json(const Json& j);
Eigen::VectorXd vector_from_json(const Json& j);

Json to_json(const SymplecticMatrix& g);
Json to_json(const IntegerSymplectic& g);
Json to_json(const HeisenbergElement& h);
Json to_json(const JacobiElement& j);
Json to_json(const JacobiLatticeElement& w);
Json to_json(const IwasawaCoords& c);
Json to_json(const PartialCoords& c);
Json to_json(const GrenierResult& r);
Json to_json(const SymplecticReduction& r);
Json to_json(const JacobiReduction& r);

SymplecticMatrix symplectic_from_json(const Json& j);
IntegerSymplectic integer_symplectic_from_json(const Json& j);
HeisenbergElement heisenberg_from_json(const Json& j);
JacobiElement jacobi_from_json(const Json& j);

} // namespace theta
