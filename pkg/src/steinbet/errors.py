"""Exception types shared across the package."""


class ModelError(RuntimeError):
    """A score model produced a non-finite or otherwise invalid value."""


class SamplerError(RuntimeError):
    """A sampler exceeded its proposal budget or failed to make progress."""


class EngineError(RuntimeError):
    """The betting engine hit a non-finite payoff; the stream is aborted."""


class ConfigError(ValueError):
    """A configuration file or dict failed validation.

    Messages are prefixed with the offending field path, e.g.
    ``"data_model.mean: must be a list of finite numbers"``.
    """
