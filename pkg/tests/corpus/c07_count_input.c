int main()
{
    int n;
    int i = 0;
    int s = 0;
    while (i < n) {
        s = s + 2;
        i = i + 1;
    }
    return 0;
}
