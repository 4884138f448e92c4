namespace restcheck {
}
