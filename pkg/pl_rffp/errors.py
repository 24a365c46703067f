class RffpError(Exception):
    """Base class for every error raised by pl_rffp."""


class ShapeError(RffpError):
    def __init__(self, message, expected=None, got=None):
        super().__init__(message)
        self.expected = expected
        self.got = got


class ArchitectureError(RffpError):
    def __init__(self, message, layer=None):
        super().__init__(message if layer is None else f"layer {layer}: {message}")
        self.layer = layer


class CacheError(RffpError):
    pass


class LabelError(RffpError):
    def __init__(self, message, label=None, num_classes=None):
        super().__init__(message)
        self.label = label
        self.num_classes = num_classes


class NonFiniteError(RffpError):
    def __init__(self, message, layer=None, epoch=None, batch=None):
        where = []
        if epoch is not None:
            where.append(f"epoch {epoch}")
        if batch is not None:
            where.append(f"batch {batch}")
        if layer is not None:
            where.append(f"parameter {layer}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.layer = layer
        self.epoch = epoch
        self.batch = batch


class SignalError(RffpError):
    pass


class FormatError(RffpError):
    def __init__(self, message, path=None):
        super().__init__(message if path is None else f"{path}: {message}")
        self.path = path


class VersionMismatchError(FormatError):
    pass


class TruncatedFileError(FormatError):
    pass


class DigestMismatchError(FormatError):
    pass


class ConfigError(RffpError):
    pass
