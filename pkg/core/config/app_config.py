"""
Application-wide configuration settings
"""
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class AppConfig:
    # Application metadata
    APP_NAME = "infoplan"
    APP_VERSION = "0.1.0"

    # Logging
    LOG_LEVEL = os.getenv("INFOPLAN_LOG", "INFO").upper()
    LOG_FILE = os.getenv("INFOPLAN_LOG_FILE") or None

    # CLI exit codes
    EXIT_OK = 0
    EXIT_CONFIG_ERROR = 2
    EXIT_IO_ERROR = 3
