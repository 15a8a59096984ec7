int inj_system_sink() {
    int x = recv();
    system(x);
    return 0;
}
