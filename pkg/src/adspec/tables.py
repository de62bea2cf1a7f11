"""Published rejection probabilities (1000 replications per cell).

Tables 1 and 2 use the stationary test with rho in {0.1, 0.5}; Tables 3 and
4 use the blocked test with rho = 0.5.  Each row holds the rates at the 5%,
10% and 15% levels.
"""

ALPHAS = (0.05, 0.10, 0.15)
SAMPLE_SIZES = (128, 256, 512, 1024)

# TABLE_1[model][rho][T] -> (5%, 10%, 15%)
TABLE_1 = {
    "A": {
        0.1: {128: (0.044, 0.081, 0.133), 256: (0.067, 0.131, 0.181),
              512: (0.067, 0.120, 0.171), 1024: (0.046, 0.094, 0.155)},
        0.5: {128: (0.041, 0.077, 0.133), 256: (0.075, 0.120, 0.168),
              512: (0.060, 0.125, 0.156), 1024: (0.039, 0.090, 0.140)},
    },
    "B": {
        0.1: {128: (0.056, 0.104, 0.150), 256: (0.056, 0.111, 0.168),
              512: (0.066, 0.106, 0.155), 1024: (0.056, 0.101, 0.164)},
        0.5: {128: (0.050, 0.088, 0.148), 256: (0.045, 0.103, 0.158),
              512: (0.073, 0.118, 0.172), 1024: (0.050, 0.097, 0.145)},
    },
    "C": {
        0.1: {128: (0.050, 0.098, 0.140), 256: (0.065, 0.127, 0.176),
              512: (0.061, 0.110, 0.162), 1024: (0.044, 0.096, 0.148)},
        0.5: {128: (0.042, 0.089, 0.135), 256: (0.057, 0.119, 0.165),
              512: (0.054, 0.109, 0.150), 1024: (0.044, 0.098, 0.137)},
    },
    "D": {
        0.1: {128: (0.046, 0.095, 0.130), 256: (0.058, 0.121, 0.172),
              512: (0.060, 0.121, 0.160), 1024: (0.045, 0.098, 0.148)},
        0.5: {128: (0.041, 0.080, 0.122), 256: (0.058, 0.113, 0.162),
              512: (0.053, 0.105, 0.155), 1024: (0.037, 0.091, 0.137)},
    },
    "E": {
        0.1: {128: (0.056, 0.118, 0.193), 256: (0.056, 0.093, 0.148),
              512: (0.030, 0.077, 0.121), 1024: (0.050, 0.112, 0.164)},
        0.5: {128: (0.053, 0.112, 0.167), 256: (0.057, 0.106, 0.149),
              512: (0.038, 0.093, 0.134), 1024: (0.064, 0.111, 0.166)},
    },
}

TABLE_2 = {
    "F": {
        0.1: {128: (0.183, 0.279, 0.358), 256: (0.425, 0.541, 0.614),
              512: (0.617, 0.724, 0.782), 1024: (0.835, 0.899, 0.929)},
        0.5: {128: (0.197, 0.279, 0.347), 256: (0.417, 0.533, 0.606),
              512: (0.614, 0.727, 0.783), 1024: (0.829, 0.895, 0.922)},
    },
    "G": {
        0.1: {128: (0.128, 0.228, 0.299), 256: (0.285, 0.410, 0.488),
              512: (0.443, 0.566, 0.628), 1024: (0.639, 0.765, 0.828)},
        0.5: {128: (0.130, 0.206, 0.295), 256: (0.273, 0.384, 0.475),
              512: (0.440, 0.567, 0.628), 1024: (0.642, 0.750, 0.809)},
    },
    "H": {
        0.1: {128: (0.089, 0.162, 0.224), 256: (0.117, 0.209, 0.286),
              512: (0.138, 0.235, 0.321), 1024: (0.260, 0.388, 0.480)},
        0.5: {128: (0.072, 0.153, 0.223), 256: (0.111, 0.201, 0.280),
              512: (0.142, 0.245, 0.330), 1024: (0.256, 0.396, 0.504)},
    },
    "I": {
        0.1: {128: (0.129, 0.200, 0.254), 256: (0.166, 0.242, 0.304),
              512: (0.182, 0.281, 0.354), 1024: (0.288, 0.419, 0.488)},
        0.5: {128: (0.113, 0.183, 0.244), 256: (0.147, 0.240, 0.315),
              512: (0.174, 0.269, 0.350), 1024: (0.320, 0.428, 0.507)},
    },
}

# blocked tables: TABLE_n[model][T] -> (5%, 10%, 15%), rho = 0.5
BLOCK_COUNTS = {128: 2, 256: 3, 512: 4, 1024: 6}

TABLE_3 = {
    "J": {128: (0.057, 0.119, 0.176), 256: (0.062, 0.116, 0.174),
          512: (0.066, 0.132, 0.180), 1024: (0.054, 0.109, 0.161)},
    "K": {128: (0.055, 0.094, 0.135), 256: (0.055, 0.106, 0.158),
          512: (0.059, 0.096, 0.135), 1024: (0.045, 0.102, 0.162)},
    "L": {128: (0.066, 0.125, 0.186), 256: (0.106, 0.163, 0.223),
          512: (0.078, 0.141, 0.206), 1024: (0.083, 0.152, 0.218)},
    "M": {128: (0.048, 0.100, 0.166), 256: (0.055, 0.099, 0.149),
          512: (0.055, 0.102, 0.153), 1024: (0.038, 0.093, 0.154)},
    "A": {128: (0.053, 0.119, 0.177), 256: (0.062, 0.126, 0.190),
          512: (0.071, 0.130, 0.186), 1024: (0.049, 0.099, 0.156)},
    "B": {128: (0.064, 0.118, 0.159), 256: (0.045, 0.090, 0.147),
          512: (0.051, 0.105, 0.145), 1024: (0.057, 0.123, 0.171)},
}

TABLE_4 = {
    "N": {128: (0.114, 0.204, 0.277), 256: (0.205, 0.328, 0.404),
          512: (0.353, 0.492, 0.590), 1024: (0.514, 0.662, 0.753)},
    "O": {128: (0.182, 0.301, 0.389), 256: (0.168, 0.288, 0.366),
          512: (0.332, 0.466, 0.571), 1024: (0.466, 0.618, 0.715)},
    "P": {128: (0.529, 0.658, 0.732), 256: (0.766, 0.862, 0.901),
          512: (0.955, 0.988, 0.991), 1024: (0.999, 1.000, 1.000)},
    "Q": {128: (0.099, 0.171, 0.230), 256: (0.249, 0.360, 0.443),
          512: (0.764, 0.851, 0.879), 1024: (0.999, 1.000, 1.000)},
    "R": {128: (0.122, 0.209, 0.287), 256: (0.163, 0.265, 0.344),
          512: (0.261, 0.380, 0.497), 1024: (0.714, 0.812, 0.864)},
    "F": {128: (0.117, 0.185, 0.261), 256: (0.173, 0.272, 0.379),
          512: (0.307, 0.442, 0.533), 1024: (0.408, 0.586, 0.692)},
}

TABLES = {1: TABLE_1, 2: TABLE_2, 3: TABLE_3, 4: TABLE_4}
TABLE_KIND = {1: "stationary", 2: "stationary", 3: "blocked", 4: "blocked"}
BLOCKED_RHO = 0.5


def cells(table_id: int):
    """Yield (model, T, rho, published rates) for every row of a table."""
    table = TABLES[table_id]
    for model, body in table.items():
        if TABLE_KIND[table_id] == "stationary":
            for rho, rows in body.items():
                for T, rates in rows.items():
                    yield model, T, rho, rates
        else:
            for T, rates in body.items():
                yield model, T, BLOCKED_RHO, rates
