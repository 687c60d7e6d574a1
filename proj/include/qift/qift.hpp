#pragma once

#include "qift/bounds.hpp"
#include "qift/certify.hpp"
#include "qift/error.hpp"
#include "qift/field.hpp"
#include "qift/linalg.hpp"
#include "qift/mpoly.hpp"
#include "qift/newton.hpp"
#include "qift/padic.hpp"
#include "qift/parse.hpp"
#include "qift/roots.hpp"
#include "qift/unipoly.hpp"
#include "qift/verify.hpp"
