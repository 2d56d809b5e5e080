"""Exception types and process exit codes shared across the toolkit."""

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_PLACEMENT = 3


class AeroforgeError(Exception):
    """Base class for all aeroforge errors."""


class ConfigValidationError(AeroforgeError):
    """Raised when a generator config violates its invariants.

    ``problems`` lists one human-readable message per offending field.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid config: " + "; ".join(self.problems))


class PlacementExhausted(AeroforgeError):
    """Rejection sampling could not place an object within the attempt budget.

    The image is aborted rather than silently dropping objects, because
    object counts are the supervised signal.
    """

    def __init__(self, object_class, placed_so_far, attempts,
                 image_index=None, image_seed=None):
        self.object_class = object_class
        self.placed_so_far = placed_so_far
        self.attempts = attempts
        self.image_index = image_index
        self.image_seed = image_seed
        msg = (f"could not place object of class '{object_class}' after "
               f"{attempts} attempts ({placed_so_far} placed so far)")
        if image_index is not None:
            msg += f" [image_index={image_index} image_seed={image_seed}]"
        super().__init__(msg)

    def with_image(self, image_index, image_seed):
        return PlacementExhausted(self.object_class, self.placed_so_far,
                                  self.attempts, image_index, image_seed)


class HybridSourceMissing(AeroforgeError):
    """Hybrid background directory is empty or a photo cannot be decoded."""


class ManifestError(AeroforgeError):
    """A manifest file is structurally unreadable."""


class PredictionError(AeroforgeError):
    """Base class for prediction-set problems found during evaluation."""


class MissingPrediction(PredictionError):
    def __init__(self, image_id):
        self.image_id = image_id
        super().__init__(f"no prediction for image '{image_id}'")


class UnknownImageId(PredictionError):
    def __init__(self, image_id):
        self.image_id = image_id
        super().__init__(f"prediction references unknown image '{image_id}'")


class NegativePrediction(PredictionError):
    def __init__(self, image_id, value):
        self.image_id = image_id
        self.value = value
        super().__init__(f"negative count prediction {value} for image '{image_id}'")


class CurveLogError(AeroforgeError):
    """A training-log file is malformed; ``line_number`` names the bad row."""

    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"{message} (line {line_number})"
        super().__init__(message)
