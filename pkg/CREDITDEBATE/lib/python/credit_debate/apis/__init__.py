from .chat_completions import ChatCompletionsAPIClient
from .search import SearchAPIClient, SearchHit, SearchProvider, StaticSearchClient

__all__ = ["ChatCompletionsAPIClient", "SearchAPIClient", "SearchHit", "SearchProvider", "StaticSearchClient"]
