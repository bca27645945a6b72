#pragma once

#include "affine.hpp"
#include "dictionary.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "normal_form.hpp"
#include "poly.hpp"
#include "portrait.hpp"
#include "quotient.hpp"
#include "realize.hpp"
#include "symmetry.hpp"
#include "tolerance.hpp"
