#pragma once

#include "convtomo/lattice.hpp"
#include "convtomo/two_sat.hpp"
#include "convtomo/filling.hpp"
#include "convtomo/hvpoly.hpp"
#include "convtomo/dagtomo1.hpp"
#include "convtomo/dagtomo2.hpp"
#include "convtomo/oracle.hpp"
#include "convtomo/io.hpp"
