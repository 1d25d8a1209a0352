#pragma once

#include "thp/error.hpp"
#include "thp/symbol.hpp"
#include "thp/factorization.hpp"
#include "thp/pair.hpp"
#include "thp/operators.hpp"
#include "thp/classify.hpp"
#include "thp/pc_fredholm.hpp"
#include "thp/verify.hpp"
#include "thp/io.hpp"
