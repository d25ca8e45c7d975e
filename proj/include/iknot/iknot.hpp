#pragma once

// Everything except the command-line front end.

#include "iknot/cfk_io.hpp"
#include "iknot/complex.hpp"
#include "iknot/errors.hpp"
#include "iknot/gf2.hpp"
#include "iknot/homology.hpp"
#include "iknot/knotlib.hpp"
#include "iknot/linmap.hpp"
#include "iknot/localequiv.hpp"
#include "iknot/morphism.hpp"
#include "iknot/ring.hpp"
#include "iknot/tensorsum.hpp"
