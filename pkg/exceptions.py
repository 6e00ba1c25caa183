# selmer/exceptions.py
USAGE_ERROR = 2
DOMAIN_ERROR = 2
RESOURCE_ERROR = 3


class SelmerException(Exception):
    def __init__(self, status_code: int, detail: str):
        super().__init__(detail)
        self.status_code = status_code
        self.detail = detail


class UsageError(SelmerException):
    def __init__(self, detail: str):
        super().__init__(status_code=USAGE_ERROR, detail=detail)


class DomainError(SelmerException, ValueError):
    def __init__(self, detail: str):
        super().__init__(status_code=DOMAIN_ERROR, detail=detail)


class ResourceError(SelmerException):
    def __init__(self, detail: str):
        super().__init__(status_code=RESOURCE_ERROR, detail=detail)
