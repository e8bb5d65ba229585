#include "sph/graded.hpp"

namespace sph {

template std::map<int, int> homology_dims<Rational>(const Complex<Rational>&);
template std::map<int, int> homology_dims<Fp>(const Complex<Fp>&);

}  // namespace sph
