#include "fraclab/error.hpp"

namespace fraclab::detail {

void throw_domain(const std::string& what) { throw DomainError(what); }
void throw_structural(const std::string& what) { throw StructuralError(what); }
void throw_numerical(const std::string& what) { throw NumericalError(what); }

}  // namespace fraclab::detail
