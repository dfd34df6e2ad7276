#pragma once

#include "optogup/constants.hpp"
#include "optogup/errors.hpp"
#include "optogup/model.hpp"
#include "optogup/ledger.hpp"
#include "optogup/spectra.hpp"
#include "optogup/bounds.hpp"
#include "optogup/oracles/correlation.hpp"
#include "optogup/oracles/quadrature.hpp"
#include "optogup/oracles/langevin.hpp"
#include "optogup/oracles/fock.hpp"
#include "optogup/io/presets.hpp"
#include "optogup/io/config.hpp"
#include "optogup/io/report.hpp"
#include "optogup/verification.hpp"
#include "optogup/io/commands.hpp"
