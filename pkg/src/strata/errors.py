"""Error hierarchy shared by the engine, gateway, lens, analytics, and service.

Every concrete error carries a stable machine-readable ``code`` so the HTTP
layer can map engine failures to API errors without a hand-maintained table.
"""

from __future__ import annotations


class StrataError(Exception):
    """Base class for all engine-level errors."""

    code: str = "internal_error"
    http_status: int = 500

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.__doc__ or self.code)
        self.message = message or (self.__doc__ or self.code)
        self.details = details


# --- workspace engine -------------------------------------------------------

class UnknownWorkspace(StrataError):
    """No workspace with that id."""

    code = "unknown_workspace"
    http_status = 404


class UnknownCanvas(StrataError):
    """No canvas with that id in this workspace."""

    code = "unknown_canvas"
    http_status = 404


class UnknownNode(StrataError):
    """No node with that id on this canvas."""

    code = "unknown_node"
    http_status = 404


class UnknownEdge(StrataError):
    """No edge with that id on this canvas."""

    code = "unknown_edge"
    http_status = 404


class ForbiddenKind(StrataError):
    """Node kind not allowed in this operation."""

    code = "forbidden_kind"
    http_status = 422


class InvalidSpan(StrataError):
    """Extraction span outside the source text or off a character boundary."""

    code = "invalid_span"
    http_status = 422


class AlreadyGrouped(StrataError):
    """Node is already a member of a group."""

    code = "already_grouped"
    http_status = 409


class SelfLoop(StrataError):
    """Edges must connect two distinct nodes."""

    code = "self_loop"
    http_status = 422


class DuplicateEdge(StrataError):
    """An edge with this (source, target) pair already exists."""

    code = "duplicate_edge"
    http_status = 409


class UndivableKind(StrataError):
    """This node kind cannot be dived into."""

    code = "undivable_kind"
    http_status = 422


class NotARoot(StrataError):
    """Canvas is not a hierarchy root."""

    code = "not_a_root"
    http_status = 422


class EmptyJoinList(StrataError):
    """At least one root canvas is required."""

    code = "empty_join_list"
    http_status = 422


class EmptyTopic(StrataError):
    """Canvas topic must be nonempty."""

    code = "empty_topic"
    http_status = 422


class WouldEmptyWorkspace(StrataError):
    """Refusing to delete the last remaining canvas."""

    code = "would_empty_workspace"
    http_status = 409


class EmptySelection(StrataError):
    """At least one node is required."""

    code = "empty_selection"
    http_status = 422


class UserTopicLocked(StrataError):
    """A user-set topic is never overwritten by LLM summarization."""

    code = "user_topic_locked"
    http_status = 409


class EmptyText(StrataError):
    """Operation requires the node to carry text."""

    code = "empty_text"
    http_status = 422


# --- LLM gateway ------------------------------------------------------------

class MissingParam(StrataError):
    """A template placeholder was left unbound."""

    code = "missing_param"
    http_status = 422


class UnknownTemplateKind(StrataError):
    """No template with that kind."""

    code = "unknown_template_kind"
    http_status = 422


class ProviderError(StrataError):
    """The completion provider failed."""

    code = "provider_error"
    http_status = 502

    def __init__(self, message: str = "", status: int | None = None, **details):
        super().__init__(message, **details)
        self.status = status


class RateLimited(ProviderError):
    """The provider rate-limited the request and retries were exhausted."""

    code = "rate_limited"
    http_status = 429


class TransportFailure(ProviderError):
    """The provider could not be reached (network-level failure)."""

    code = "transport_failure"
    http_status = 502


class ProviderTimeout(ProviderError):
    """The provider did not answer within the configured timeout."""

    code = "provider_timeout"
    http_status = 504


class EmptyDigest(StrataError):
    """Canvas digest must be nonempty."""

    code = "empty_digest"
    http_status = 422


# --- semantic lens ----------------------------------------------------------

class NonpositiveZoom(StrataError):
    """Zoom magnification must be > 0."""

    code = "nonpositive_zoom"
    http_status = 422


class UnknownLevel(StrataError):
    """No semantic level with that name."""

    code = "unknown_level"
    http_status = 422


# --- analytics --------------------------------------------------------------

class EmptyGlossary(StrataError):
    """Glossary must contain at least one term."""

    code = "empty_glossary"
    http_status = 422


# --- persistence / service --------------------------------------------------

class IoError(StrataError):
    """Filesystem read or write failed."""

    code = "io_error"
    http_status = 500


class VersionMismatch(StrataError):
    """Workspace file format version is not supported."""

    code = "version_mismatch"
    http_status = 409


class CorruptFile(StrataError):
    """Workspace file is malformed."""

    code = "corrupt_file"
    http_status = 409


class PortInUse(StrataError):
    """The configured port is already bound."""

    code = "port_in_use"
    http_status = 500


class ConfigInvalid(StrataError):
    """Service configuration is invalid."""

    code = "config_invalid"
    http_status = 500
