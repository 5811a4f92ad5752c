# Utils package for the identification tools
