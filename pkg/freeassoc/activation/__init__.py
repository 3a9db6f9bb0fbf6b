from .spreading import (ActivationParams, ActivationVector, ActivationMatrix, ActivationException, spread,
                        propagate, transition_operator)
from .diameter import diameter
from .batch_activate import spread_batch
