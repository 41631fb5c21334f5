#pragma once

#include "cmtorsion/bounds.hpp"
#include "cmtorsion/enumeration.hpp"
#include "cmtorsion/errors.hpp"
#include "cmtorsion/field.hpp"
#include "cmtorsion/integer.hpp"
#include "cmtorsion/intlattice.hpp"
#include "cmtorsion/io.hpp"
#include "cmtorsion/matrix.hpp"
#include "cmtorsion/mordell_weil.hpp"
#include "cmtorsion/order.hpp"
#include "cmtorsion/reductions.hpp"
#include "cmtorsion/siegel.hpp"
#include "cmtorsion/subgroup.hpp"
