#pragma once

#include "yall/analytics.hpp"
#include "yall/classifier.hpp"
#include "yall/dataset.hpp"
#include "yall/error.hpp"
#include "yall/europarl.hpp"
#include "yall/fixture.hpp"
#include "yall/geo.hpp"
#include "yall/instance.hpp"
#include "yall/random.hpp"
#include "yall/text.hpp"
#include "yall/twitter.hpp"
