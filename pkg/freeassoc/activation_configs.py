from freeassoc.activation.spreading import ActivationParams

# Keep half, no decay, no suppression.  Initial
# activation (node count) and iterations (2 x diameter) are resolved per
# network.
DefaultParams = ActivationParams(
    retention=0.5,
    decay=0.0,
    suppress=0.0,
    initial_activation=None,
    iterations=None,
    weighted=True
)

# Same, but activation is split evenly among neighbours regardless of
# response frequency.
UnweightedParams = ActivationParams(
    retention=0.5,
    decay=0.0,
    suppress=0.0,
    initial_activation=None,
    iterations=None,
    weighted=False
)

# Sensitivity check: activation leaks away over time and tiny residues are
# cut off, so targets far from the prime drop to zero.
DecayParams = ActivationParams(
    retention=0.5,
    decay=0.1,
    suppress=1e-6,
    initial_activation=None,
    iterations=None,
    weighted=True
)

PRESETS = {
    "default": DefaultParams,
    "unweighted": UnweightedParams,
    "decay": DecayParams,
}
