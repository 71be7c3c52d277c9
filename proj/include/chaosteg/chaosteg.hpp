#pragma once

#include "chaosteg/errors.hpp"
#include "chaosteg/image.hpp"
#include "chaosteg/chaos.hpp"
#include "chaosteg/kvfile.hpp"
#include "chaosteg/keyfile.hpp"
#include "chaosteg/png.hpp"
#include "chaosteg/imageio.hpp"
#include "chaosteg/cipher.hpp"
#include "chaosteg/stego.hpp"
#include "chaosteg/metrics.hpp"
#include "chaosteg/pipeline.hpp"
