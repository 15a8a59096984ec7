int inj_two_flows() {
    int x = input();
    int y = recv();
    exec(x);
    system(y);
    return 0;
}
