# Core management commands package