class ExitCode:
    SUCCESS = 0
    INTERNAL_ERROR = 1
    INVALID_CONFIG = 2
    RESOURCE_CAP = 3
    DEGENERATE_OUTCOME = 4
