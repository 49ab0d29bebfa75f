#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace axibouss::tools {

// Each suite prints a short report and returns true when every criterion holds.
bool oracle_elliptic_manufactured(std::ostream& out);
bool oracle_heat_kernel_5d(std::ostream& out);
bool oracle_translation(std::ostream& out);
bool oracle_strain_sharpness(std::ostream& out);
bool oracle_biot_savart_ring(std::ostream& out);

bool lp_verify(std::ostream& out);

std::vector<std::string> oracle_names();
/// Returns false for an unknown name (and sets `known` to false).
bool run_oracle(const std::string& name, std::ostream& out, bool& known);

} // namespace axibouss::tools
