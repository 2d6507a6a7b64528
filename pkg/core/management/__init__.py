# Core management package