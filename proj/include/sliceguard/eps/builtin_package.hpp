#pragma once

#include "sliceguard/desc/schema.hpp"

namespace sliceguard::eps {

// The virtualized EPS package: six VNFs (HSS, MME, SPGW-C, SPGW-U, eNB,
// UE), the oai-eps NSD wiring S6a/S1-C/S1-U/S11/Sx/Uu, and the two slice
// templates (eMBB / URLLC).
desc::DescriptorPackage builtin_eps_package();

}  // namespace sliceguard::eps
