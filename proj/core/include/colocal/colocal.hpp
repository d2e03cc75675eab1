#pragma once

#include <colocal/error.hpp>
#include <colocal/fn_table.hpp>
#include <colocal/forms.hpp>
#include <colocal/functions.hpp>
#include <colocal/l2.hpp>
#include <colocal/linalg.hpp>
#include <colocal/measure.hpp>
#include <colocal/scalar.hpp>
#include <colocal/state_space.hpp>
#include <colocal/varadhan.hpp>
