// Umbrella header.
#pragma once

#include "enscert/campaign.hpp"
#include "enscert/certificate.hpp"
#include "enscert/constants.hpp"
#include "enscert/covering.hpp"
#include "enscert/errors.hpp"
#include "enscert/field_io.hpp"
#include "enscert/integrator.hpp"
#include "enscert/nonlinear.hpp"
#include "enscert/random_field.hpp"
#include "enscert/scaling.hpp"
#include "enscert/spectral_field.hpp"
#include "enscert/stokes_basis.hpp"
