import threading

import sentry_sdk


class SentryService:
    _instance = None
    _lock = threading.Lock()

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super(SentryService, cls).__new__(cls)
        return cls._instance

    def __init__(self):
        if not hasattr(self, 'initialized'):
            self.initialized = False

    @classmethod
    def get_instance(cls):
        """Get the initialized instance of SentryService."""
        if cls._instance is None or not cls._instance.initialized:
            raise RuntimeError("Sentry service is not initialized.")
        return cls._instance

    def init(self, dsn: str, traces_sample_rate: float = 0.0, debug: bool = False) -> bool:
        """Initialize error capture. Experiments are batch jobs, so no web integrations are loaded."""
        if self.initialized:
            return False
        sentry_sdk.init(
            dsn=dsn,
            debug=debug,
            default_integrations=False,
            traces_sample_rate=traces_sample_rate,
        )
        self.initialized = True
        return True

    def capture_exception(self, exception: Exception):
        if not self.initialized:
            raise RuntimeError("Sentry service is not initialized. Please initialize before capturing exceptions.")
        sentry_sdk.capture_exception(exception)
