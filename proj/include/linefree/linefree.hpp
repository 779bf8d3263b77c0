// linefree.hpp — umbrella header.

#pragma once

#include "linefree/gf.hpp"
#include "linefree/bounds.hpp"
#include "linefree/projgeom.hpp"
#include "linefree/form.hpp"
#include "linefree/analysis.hpp"
#include "linefree/search.hpp"
#include "linefree/verify.hpp"
