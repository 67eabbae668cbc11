#include "gpsvmc/wavefunction.hpp"

#include <stdexcept>

namespace gps {

Sample WaveFunction::sample(RandomEngine&) const {
  throw std::runtime_error("direct sampling is not supported by this model");
}

Eigen::VectorXcd WaveFunction::log_derivatives(const Configuration&) const {
  throw std::runtime_error("model has no variational parameters");
}

Eigen::VectorXcd WaveFunction::parameters() const {
  throw std::runtime_error("model has no variational parameters");
}

void WaveFunction::set_parameters(const Eigen::VectorXcd&) {
  throw std::runtime_error("model has no variational parameters");
}

}  // namespace gps
