#pragma once

#include <exactfw/blockop.hpp>
#include <exactfw/errors.hpp>
#include <exactfw/eriksen.hpp>
#include <exactfw/expgen.hpp>
#include <exactfw/floquet.hpp>
#include <exactfw/io.hpp>
#include <exactfw/matfun.hpp>
#include <exactfw/models.hpp>
#include <exactfw/tolerances.hpp>
