# Core initialization
